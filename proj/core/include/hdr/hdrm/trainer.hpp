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

#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "hdr/hdrm/losses.hpp"
#include "hdr/hdrm/model.hpp"
#include "hdr/nn/params.hpp"

namespace hdr::hdrm {

struct HdrExample {
  maskops::HdrInput input;
  ImageGrid target;  ///< the scene with only the target hand, fully visible
};

struct HdrTrainConfig {
  long stage1_steps = 1000;  ///< ground-truth masks
  long stage2_steps = 1000;  ///< segmenter masks
  int batch_size = 4;
  double lr_stage1 = 1.5e-3;
  double lr_stage2 = 1e-3;
  double lr_discriminator = 1e-3;
  LossWeights weights;
  std::vector<int> discriminator_widths{32, 64, 128};
  std::vector<int> feature_widths{16, 32, 64};

  nlohmann::json to_json() const;
  static HdrTrainConfig from_json(const nlohmann::json& j);
};

struct HdrStepLog {
  long step = 0;
  int stage = 1;
  double l1 = 0, perceptual = 0, style = 0, gan_generator = 0, gan_discriminator = 0, total = 0;
};

void write_log_header(std::ostream& os, const HdrStepLog*);
void write_log_row(std::ostream& os, const HdrStepLog& row);

/// Two-stage generator/discriminator training with 1:1 alternation. The step
/// counter and both optimizers persist across stages and through
/// checkpoints, so a resumed run continues exactly where it stopped.
class HdrTrainer {
 public:
  HdrTrainer(HdrNet& net, HdrTrainConfig config, RngSeed seed);

  HdrStepLog step(const std::vector<HdrExample>& data, int stage);
  /// Runs the remaining steps of both stages. Without stage-2 data the second
  /// stage is skipped with a warning on stderr.
  std::vector<HdrStepLog> run(const std::vector<HdrExample>& stage1, const std::vector<HdrExample>* stage2,
                              std::ostream* csv = nullptr);

  long steps() const { return steps_; }
  const HdrTrainConfig& config() const { return config_; }

  nn::Checkpoint state() const;
  void restore(const nn::Checkpoint& ckpt);

 private:
  HdrNet* net_;
  HdrTrainConfig config_;
  RngSeed seed_;
  PatchDiscriminator disc_;
  FeatureExtractor phi_;
  nn::Adam opt_g_;
  nn::Adam opt_d_;
  long steps_ = 0;
};

}  // namespace hdr::hdrm
