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
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "hdr/hasm/model.hpp"
#include "hdr/nn/params.hpp"

namespace hdr::hasm {

struct SegExample {
  ImageGrid image;  ///< full frame at the model input size
  MaskQuad masks;
};

struct SegTrainConfig {
  long steps = 1000;
  int batch_size = 4;
  double lr = 2.5e-3;
  /// Polynomial decay: lr * (1 - step / steps)^poly_power. 0 keeps lr fixed.
  double poly_power = 1.0;

  double lr_at(long step) const;

  nlohmann::json to_json() const;
  static SegTrainConfig from_json(const nlohmann::json& j);
};

struct SegStepLog {
  long step = 0;
  std::array<double, kNumHeads> head{};  ///< ra, rv, la, lv
  double total = 0;
};

void write_log_header(std::ostream& os, const SegStepLog*);
void write_log_row(std::ostream& os, const SegStepLog& row);

class SegTrainer {
 public:
  SegTrainer(SegModel& model, SegTrainConfig config, RngSeed seed);

  SegStepLog step(const std::vector<SegExample>& data);
  /// Runs until config.steps, appending rows to csv when given.
  std::vector<SegStepLog> run(const std::vector<SegExample>& data, std::ostream* csv = nullptr);

  long steps() const { return steps_; }

  nn::Checkpoint state() const;
  void restore(const nn::Checkpoint& ckpt);

 private:
  SegModel* model_;
  SegTrainConfig config_;
  RngSeed seed_;
  nn::Adam opt_;
  long steps_ = 0;
};

/// Per-head BCE of a model on one example, without gradients.
std::array<double, kNumHeads> evaluate_heads(const SegModel& model, const SegExample& ex);

}  // namespace hdr::hasm
