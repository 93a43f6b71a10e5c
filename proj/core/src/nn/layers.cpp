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
#include "hdr/nn/layers.hpp"

#include <cmath>

#include "hdr/core/error.hpp"

namespace hdr::nn {

Conv2d::Conv2d(ParamStore& ps, const std::string& name, int in_ch, int out_ch, int kernel,
               int stride_, int pad_, Rng& rng, bool with_bias)
    : stride(stride_), pad(pad_) {
  weight = ps.add(name + ".weight", he_normal({out_ch, in_ch, kernel, kernel}, in_ch * kernel * kernel, rng));
  if (with_bias) bias = ps.add(name + ".bias", Tensor::zeros({out_ch}));
}

Linear::Linear(ParamStore& ps, const std::string& name, int in_dim, int out_dim, Rng& rng) {
  // Transformer-style init: N(0, 0.02).
  std::vector<double> w(static_cast<std::size_t>(in_dim) * out_dim);
  for (double& v : w) v = 0.02 * rng.normal();
  weight = ps.add(name + ".weight", Tensor::make({out_dim, in_dim}, std::move(w)));
  bias = ps.add(name + ".bias", Tensor::zeros({out_dim}));
}

LayerNorm::LayerNorm(ParamStore& ps, const std::string& name, int dim) {
  gamma = ps.add(name + ".gamma", Tensor::full({dim}, 1.0));
  beta = ps.add(name + ".beta", Tensor::zeros({dim}));
}

Tensor to_tokens(const Tensor& x) {
  const int n = x.dim(0), c = x.dim(1), hw = x.dim(2) * x.dim(3);
  return reshape(permute(x, {0, 2, 3, 1}), {n, hw, c});
}

Tensor from_tokens(const Tensor& t, int h, int w) {
  const int n = t.dim(0), c = t.dim(2);
  if (t.dim(1) != h * w) throw ShapeMismatch("from_tokens: token count");
  return permute(reshape(t, {n, h, w, c}), {0, 3, 1, 2});
}

TransformerBlock::TransformerBlock(ParamStore& ps, const std::string& name, int dim, int heads,
                                   int mlp_ratio, int reduction, Rng& rng)
    : dim_(dim), heads_(heads), reduction_(reduction) {
  if (dim % heads != 0) throw InvalidInput("TransformerBlock: dim not divisible by heads");
  norm1_ = LayerNorm(ps, name + ".norm1", dim);
  q_ = Linear(ps, name + ".q", dim, dim, rng);
  kv_ = Linear(ps, name + ".kv", dim, 2 * dim, rng);
  proj_ = Linear(ps, name + ".proj", dim, dim, rng);
  norm2_ = LayerNorm(ps, name + ".norm2", dim);
  fc1_ = Linear(ps, name + ".fc1", dim, dim * mlp_ratio, rng);
  fc2_ = Linear(ps, name + ".fc2", dim * mlp_ratio, dim, rng);
}

namespace {

// [N,T,H*D] -> [N*H,T,D]
Tensor split_heads(const Tensor& x, int heads) {
  const int n = x.dim(0), t = x.dim(1), d = x.dim(2) / heads;
  return reshape(permute(reshape(x, {n, t, heads, d}), {0, 2, 1, 3}), {n * heads, t, d});
}

// [N*H,T,D] -> [N,T,H*D]
Tensor merge_heads(const Tensor& x, int n) {
  const int heads = x.dim(0) / n, t = x.dim(1), d = x.dim(2);
  return reshape(permute(reshape(x, {n, heads, t, d}), {0, 2, 1, 3}), {n, t, heads * d});
}

}  // namespace

Tensor TransformerBlock::attention(const Tensor& tokens, const Tensor& kv_tokens, int n) const {
  const int d = dim_ / heads_;
  Tensor q = split_heads(q_(tokens), heads_);
  Tensor kv = kv_(kv_tokens);
  const int tk = kv.dim(1);
  Tensor kv4 = reshape(kv, {n * tk, 2 * dim_});
  // Split K and V along the feature axis by viewing [N*T, 2, D] as channels.
  Tensor kv_split = reshape(kv4, {n * tk, 2, dim_, 1});
  Tensor k = split_heads(reshape(slice_channels(kv_split, 0, 1), {n, tk, dim_}), heads_);
  Tensor v = split_heads(reshape(slice_channels(kv_split, 1, 2), {n, tk, dim_}), heads_);
  Tensor scores = scale(bmm(q, k, /*transpose_b=*/true), 1.0 / std::sqrt(static_cast<double>(d)));
  Tensor out = bmm(softmax_lastdim(scores), v);
  return proj_(merge_heads(out, n));
}

Tensor TransformerBlock::operator()(const Tensor& x) const {
  const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
  Tensor tokens = to_tokens(x);
  Tensor normed = norm1_(tokens);
  Tensor kv_tokens = normed;
  if (reduction_ > 1) {
    kv_tokens = norm1_(to_tokens(avg_pool(x, reduction_)));
  }
  tokens = add(tokens, attention(normed, kv_tokens, n));
  tokens = add(tokens, fc2_(gelu(fc1_(norm2_(tokens)))));
  return from_tokens(tokens, h, w);
}

}  // namespace hdr::nn
