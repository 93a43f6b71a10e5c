// Copyright 2026 The HDR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <string>

#include "hdr/core/rng.hpp"
#include "hdr/nn/ops.hpp"
#include "hdr/nn/params.hpp"

namespace hdr::nn {

struct Conv2d {
  Tensor weight;
  Tensor bias;
  int stride = 1;
  int pad = 0;

  Conv2d() = default;
  Conv2d(ParamStore& ps, const std::string& name, int in_ch, int out_ch, int kernel, int stride,
         int pad, Rng& rng, bool with_bias = true);

  int kernel() const { return weight.dim(2); }
  Tensor operator()(const Tensor& x) const { return conv2d(x, weight, bias, stride, pad); }
};

struct Linear {
  Tensor weight;
  Tensor bias;

  Linear() = default;
  Linear(ParamStore& ps, const std::string& name, int in_dim, int out_dim, Rng& rng);

  Tensor operator()(const Tensor& x) const { return linear(x, weight, bias); }
};

struct LayerNorm {
  Tensor gamma;
  Tensor beta;

  LayerNorm() = default;
  LayerNorm(ParamStore& ps, const std::string& name, int dim);

  Tensor operator()(const Tensor& x) const { return layer_norm(x, gamma, beta); }
};

/// [N,C,H,W] -> [N,H*W,C]
Tensor to_tokens(const Tensor& x);
/// [N,H*W,C] -> [N,C,H,W]
Tensor from_tokens(const Tensor& t, int h, int w);

/// Pre-norm transformer block over a feature map: multi-head self-attention
/// whose keys and values may come from an average-pooled copy of the map
/// (spatial reduction), followed by a GELU MLP. Both sublayers are residual.
class TransformerBlock {
 public:
  TransformerBlock() = default;
  TransformerBlock(ParamStore& ps, const std::string& name, int dim, int heads, int mlp_ratio,
                   int reduction, Rng& rng);

  Tensor operator()(const Tensor& x) const;

 private:
  Tensor attention(const Tensor& tokens, const Tensor& kv_tokens, int n) const;

  int dim_ = 0;
  int heads_ = 1;
  int reduction_ = 1;
  LayerNorm norm1_, norm2_;
  Linear q_, kv_, proj_, fc1_, fc2_;
};

}  // namespace hdr::nn
