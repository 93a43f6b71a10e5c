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

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "hdr/core/rng.hpp"
#include "hdr/hdrm/partial_conv.hpp"
#include "hdr/maskops/maskops.hpp"
#include "hdr/nn/layers.hpp"
#include "hdr/nn/params.hpp"

namespace hdr::hdrm {

struct HdrNetConfig {
  int input_size = 256;
  std::vector<int> widths{32, 64, 128, 256};
  int transformer_blocks = 2;
  int heads = 4;
  int mlp_ratio = 2;
  /// Keys/values of the bottleneck attention are average-pooled by this factor.
  int attention_reduction = 1;

  static HdrNetConfig fast();
  void validate() const;
  nlohmann::json to_json() const;
  static HdrNetConfig from_json(const nlohmann::json& j);
};

/// Network input for a batch: the 8 stacked channels, the initial validity
/// 1 - hole, the hole itself and the known image used for compositing.
struct HdrBatch {
  nn::Tensor x;         ///< [N,8,H,W]: i_d, m_rv, i_r, m_bv
  nn::Tensor validity;  ///< [N,8,H,W]: i_d outside m_d, i_r outside m_r, masks outside the hole
  nn::Tensor hole;      ///< [N,1,H,W]
  nn::Tensor known;     ///< [N,3,H,W] (i_d; equals the crop outside the hole)
};
HdrBatch make_batch(const std::vector<const maskops::HdrInput*>& inputs);

struct HdrForward {
  nn::Tensor raw;        ///< network output in (0,1)
  nn::Tensor composite;  ///< raw inside the hole, known pixels elsewhere
};

/// U-shaped partial-convolution encoder/decoder with transformer blocks at
/// the 1/8 resolution bottleneck.
class HdrNet {
 public:
  HdrNet(HdrNetConfig config, RngSeed seed);

  /// \`validity_trace\` receives the validity after the bottleneck and after
  /// each decoder stage.
  HdrForward forward(const HdrBatch& batch, std::vector<nn::Tensor>* validity_trace = nullptr) const;
  /// Validated single-input inference; returns the composite.
  ImageGrid infer(const maskops::HdrInput& input) const;

  const HdrNetConfig& config() const { return config_; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

  nn::Checkpoint to_checkpoint() const;
  static HdrNet from_checkpoint(const nn::Checkpoint& ckpt);

 private:
  HdrNetConfig config_;
  nn::ParamStore params_;
  std::vector<PartialConv2d> encoder_;
  std::vector<nn::TransformerBlock> blocks_;
  std::vector<PartialConv2d> decoder_;
  nn::Conv2d head_;
};

/// Frozen, seed-initialized convolutional pyramid used by the perceptual and
/// style losses. Its weights never receive gradients. GELU keeps the features
/// smooth in the input.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(RngSeed seed, std::vector<int> widths = {16, 32, 64});
  std::vector<nn::Tensor> operator()(const nn::Tensor& image) const;
  int stages() const { return static_cast<int>(convs_.size()); }
  const std::vector<nn::Conv2d>& layers() const { return convs_; }

 private:
  std::vector<nn::Conv2d> convs_;
};

/// Strided patch discriminator producing a grid of logits.
class PatchDiscriminator {
 public:
  PatchDiscriminator(std::vector<int> widths, RngSeed seed);
  nn::Tensor operator()(const nn::Tensor& image) const;
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }
  const std::vector<int>& widths() const { return widths_; }

 private:
  std::vector<int> widths_;
  nn::ParamStore params_;
  std::vector<nn::Conv2d> convs_;
};

}  // namespace hdr::hdrm
