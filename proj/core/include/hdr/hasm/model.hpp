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

#include <array>
#include <vector>

#include <nlohmann/json.hpp>

#include "hdr/core/image.hpp"
#include "hdr/core/rng.hpp"
#include "hdr/core/types.hpp"
#include "hdr/nn/layers.hpp"
#include "hdr/nn/params.hpp"

namespace hdr::hasm {

inline constexpr int kNumHeads = 4;
/// Head order used for tensors and logs.
inline constexpr std::array<const char*, kNumHeads> kHeadNames{"ra", "rv", "la", "lv"};

struct SegModelConfig {
  int input_size = 256;
  std::vector<int> encoder_widths{32, 64, 160, 256};
  std::vector<int> encoder_depths{1, 1, 1, 1};
  int head_channels = 64;
  int num_heads = kNumHeads;

  static SegModelConfig fast();
  /// Total downsampling of the encoder.
  static constexpr int kStride = 32;
  void validate() const;
  nlohmann::json to_json() const;
  static SegModelConfig from_json(const nlohmann::json& j);
};

struct SegPrediction {
  MaskQuad soft;    ///< per-pixel probabilities in (0,1)
  MaskQuad binary;  ///< thresholded at 0.5 with containment enforced
};

/// Thresholds a soft quad and repairs it: visible masks are cut to their
/// amodal masks and a pixel claimed by both visible masks goes to the hand
/// with the higher soft probability (right on ties).
MaskQuad enforce_containment(const MaskQuad& soft, double threshold = 0.5);

/// Hierarchical convolutional encoder shared by four light all-MLP decode
/// heads, each predicting one of m_ra, m_rv, m_la, m_lv.
class SegModel {
 public:
  SegModel(SegModelConfig config, RngSeed seed);

  /// [N,3,S,S] -> [N,4,S,S] probabilities, head order ra, rv, la, lv.
  nn::Tensor forward(const nn::Tensor& images) const;
  /// Inference on one image of the configured input size.
  SegPrediction predict(const ImageGrid& image) const;

  const SegModelConfig& config() const { return config_; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

  nn::Checkpoint to_checkpoint() const;
  static SegModel from_checkpoint(const nn::Checkpoint& ckpt);

 private:
  struct Head {
    std::vector<nn::Conv2d> project;  // one 1x1 per encoder stage
    nn::Conv2d fuse;
    nn::Conv2d classify;
  };

  SegModelConfig config_;
  nn::ParamStore params_;
  nn::Conv2d stem_;
  std::vector<nn::Conv2d> down_;                 // stages 2..4
  std::vector<std::vector<nn::Conv2d>> blocks_;  // residual blocks per stage
  std::vector<Head> heads_;
};

/// Mean BCE with predictions clamped to [1e-7, 1 - 1e-7]; targets must be
/// binary.
nn::Tensor bce_loss(const nn::Tensor& pred, const nn::Tensor& target);

struct HeadLosses {
  std::array<nn::Tensor, kNumHeads> per_head;
  nn::Tensor total;
};
/// Sum of the four per-head BCE terms for [N,4,H,W] predictions and targets.
HeadLosses has_loss(const nn::Tensor& pred, const nn::Tensor& target);

/// [N,4,H,W] target tensor from quads (ra, rv, la, lv order).
nn::Tensor stack_quads(const std::vector<const MaskQuad*>& quads);

}  // namespace hdr::hasm
