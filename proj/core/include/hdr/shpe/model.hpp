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

#include <vector>

#include <nlohmann/json.hpp>

#include "hdr/core/image.hpp"
#include "hdr/core/rng.hpp"
#include "hdr/nn/layers.hpp"
#include "hdr/nn/params.hpp"
#include "hdr/shpe/maps.hpp"

namespace hdr::shpe {

struct PoseNetConfig {
  int input_size = 256;
  std::vector<int> widths{32, 64, 128};  ///< stages at strides 2, 4, 8
  int blocks = 2;                         ///< residual blocks at stride 8
  double sigma = 2.0;
  double depth_scale_mm = 100.0;

  static PoseNetConfig fast();
  static constexpr int kStride = 8;
  int map_size() const { return input_size / kStride; }
  MapGeometry geometry() const;
  void validate() const;
  nlohmann::json to_json() const;
  static PoseNetConfig from_json(const nlohmann::json& j);
};

/// Heatmap, delta and location heads in cascade on a stride-8 trunk; the
/// later heads see the earlier predictions.
class PoseNet {
 public:
  PoseNet(PoseNetConfig config, RngSeed seed);

  /// [N,3,S,S] -> [N,144,S/8,S/8] in channel order heat, loc, delta.
  nn::Tensor forward(const nn::Tensor& images) const;
  PoseMaps predict(const ImageGrid& crop) const;

  const PoseNetConfig& config() const { return config_; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

  nn::Checkpoint to_checkpoint() const;
  static PoseNet from_checkpoint(const nn::Checkpoint& ckpt);

 private:
  PoseNetConfig config_;
  nn::ParamStore params_;
  std::vector<nn::Conv2d> down_;
  std::vector<nn::Conv2d> blocks_;  // pairs of convs per residual block
  nn::Conv2d heat_hidden_, heat_out_, delta_hidden_, delta_out_, loc_hidden_, loc_out_;
};

struct PoseLosses {
  nn::Tensor heat, loc, delta, reg, total;
};

inline constexpr double kDefaultRegWeight = 1e-5;

/// heat: MSE over the heatmaps of valid joints; loc and delta: MSE over the
/// supervised disks; reg: reg_weight times the summed squared parameters
/// (skipped when params is null). Zero with a warning when no joint is valid.
PoseLosses shpe_loss(const nn::Tensor& pred, const std::vector<const PoseTarget*>& targets,
                     const nn::ParamStore* params, double reg_weight = kDefaultRegWeight);

}  // namespace hdr::shpe
