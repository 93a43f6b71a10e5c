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

#include "hdr/shpe/model.hpp"

namespace hdr::shpe {

struct PoseExample {
  ImageGrid crop;      ///< single-hand crop at the model input size
  JointSet joints;     ///< crop-frame joints (see to_crop_frame)
};

struct PoseTrainConfig {
  long steps = 1000;
  int batch_size = 4;
  double lr = 1e-3;
  /// lr drops tenfold after each listed fraction of the schedule.
  std::vector<double> decay_at{1.0 / 3.0, 2.0 / 3.0};
  double reg_weight = kDefaultRegWeight;

  double lr_at(long step) const;
  nlohmann::json to_json() const;
  static PoseTrainConfig from_json(const nlohmann::json& j);
};

struct PoseStepLog {
  long step = 0;
  double heat = 0, loc = 0, delta = 0, reg = 0, total = 0;
};

void write_log_header(std::ostream& os, const PoseStepLog*);
void write_log_row(std::ostream& os, const PoseStepLog& row);

class PoseTrainer {
 public:
  PoseTrainer(PoseNet& net, PoseTrainConfig config, RngSeed seed);

  PoseStepLog step(const std::vector<PoseExample>& data);
  std::vector<PoseStepLog> run(const std::vector<PoseExample>& data, std::ostream* csv = nullptr);

  long steps() const { return steps_; }

  nn::Checkpoint state() const;
  void restore(const nn::Checkpoint& ckpt);

 private:
  PoseNet* net_;
  PoseTrainConfig config_;
  RngSeed seed_;
  nn::Adam opt_;
  long steps_ = 0;
};

}  // namespace hdr::shpe
