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
#include "hdr/hasm/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "hdr/core/error.hpp"
#include "hdr/nn/grid.hpp"
#include "hdr/nn/ops.hpp"

namespace hdr::hasm {

using nn::Tensor;

nlohmann::json SegTrainConfig::to_json() const {
  return {{"steps", steps}, {"batch_size", batch_size}, {"lr", lr}, {"poly_power", poly_power}};
}

SegTrainConfig SegTrainConfig::from_json(const nlohmann::json& j) {
  SegTrainConfig c;
  c.steps = j.value("steps", c.steps);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.lr = j.value("lr", c.lr);
  c.poly_power = j.value("poly_power", c.poly_power);
  return c;
}

double SegTrainConfig::lr_at(long step) const {
  if (poly_power == 0.0 || steps <= 0) return lr;
  const double remaining = std::max(0.0, 1.0 - static_cast<double>(step) / static_cast<double>(steps));
  return lr * std::pow(remaining, poly_power);
}

void write_log_header(std::ostream& os, const SegStepLog*) { os << "step,loss_ra,loss_rv,loss_la,loss_lv,total\n"; }

void write_log_row(std::ostream& os, const SegStepLog& r) {
  os << r.step;
  for (double v : r.head) os << ',' << v;
  os << ',' << r.total << '\n';
}

SegTrainer::SegTrainer(SegModel& model, SegTrainConfig config, RngSeed seed)
    : model_(&model), config_(config), seed_(seed), opt_(model.params(), nn::AdamConfig{.lr = config.lr}) {
  if (config_.batch_size <= 0) throw InvalidInput("segmenter: batch size must be positive");
  if (config_.poly_power < 0.0) throw InvalidInput("segmenter: poly power must be non-negative");
}

SegStepLog SegTrainer::step(const std::vector<SegExample>& data) {
  if (data.empty()) throw InvalidInput("segmenter: empty dataset");
  const auto idx = nn::batch_indices(seed_, steps_, static_cast<int>(data.size()), config_.batch_size);
  std::vector<const ImageGrid*> images;
  std::vector<const MaskQuad*> quads;
  for (int i : idx) {
    images.push_back(&data[i].image);
    quads.push_back(&data[i].masks);
  }
  opt_.set_lr(config_.lr_at(steps_));
  model_->params().zero_grad();
  const HeadLosses loss = has_loss(model_->forward(nn::stack_grids(images)), stack_quads(quads));
  nn::backward(loss.total);
  opt_.step();
  SegStepLog log{steps_, {}, loss.total.item()};
  for (int h = 0; h < kNumHeads; ++h) log.head[h] = loss.per_head[h].item();
  ++steps_;
  return log;
}

std::vector<SegStepLog> SegTrainer::run(const std::vector<SegExample>& data, std::ostream* csv) {
  std::vector<SegStepLog> logs;
  if (csv && steps_ == 0) write_log_header(*csv, nullptr);
  while (steps_ < config_.steps) {
    logs.push_back(step(data));
    if (csv) write_log_row(*csv, logs.back());
  }
  return logs;
}

nn::Checkpoint SegTrainer::state() const {
  nn::Checkpoint ck = model_->to_checkpoint();
  ck.config["trainer"] = config_.to_json();
  ck.config["steps"] = steps_;
  opt_.save_state(ck, "optimizer/");
  return ck;
}

void SegTrainer::restore(const nn::Checkpoint& ck) {
  nn::import_params(model_->params(), ck);
  opt_.load_state(ck, "optimizer/");
  steps_ = ck.config.at("steps").get<long>();
}

std::array<double, kNumHeads> evaluate_heads(const SegModel& model, const SegExample& ex) {
  nn::NoGradGuard guard;
  const HeadLosses loss = has_loss(model.forward(nn::grid_tensor(ex.image)), stack_quads({&ex.masks}));
  std::array<double, kNumHeads> out{};
  for (int h = 0; h < kNumHeads; ++h) out[h] = loss.per_head[h].item();
  return out;
}

}  // namespace hdr::hasm
