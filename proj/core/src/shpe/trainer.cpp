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
#include "hdr/shpe/trainer.hpp"

#include "hdr/core/error.hpp"
#include "hdr/nn/grid.hpp"
#include "hdr/nn/ops.hpp"

namespace hdr::shpe {

using nn::Tensor;

double PoseTrainConfig::lr_at(long step) const {
  double out = lr;
  for (double f : decay_at) {
    if (static_cast<double>(step) >= f * static_cast<double>(steps)) out *= 0.1;
  }
  return out;
}

nlohmann::json PoseTrainConfig::to_json() const {
  return {{"steps", steps}, {"batch_size", batch_size}, {"lr", lr}, {"decay_at", decay_at}, {"reg_weight", reg_weight}};
}

PoseTrainConfig PoseTrainConfig::from_json(const nlohmann::json& j) {
  PoseTrainConfig c;
  c.steps = j.value("steps", c.steps);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.lr = j.value("lr", c.lr);
  c.decay_at = j.value("decay_at", c.decay_at);
  c.reg_weight = j.value("reg_weight", c.reg_weight);
  return c;
}

void write_log_header(std::ostream& os, const PoseStepLog*) { os << "step,heat,loc,delta,reg,total\n"; }

void write_log_row(std::ostream& os, const PoseStepLog& r) {
  os << r.step << ',' << r.heat << ',' << r.loc << ',' << r.delta << ',' << r.reg << ',' << r.total << '\n';
}

PoseTrainer::PoseTrainer(PoseNet& net, PoseTrainConfig config, RngSeed seed)
    : net_(&net), config_(std::move(config)), seed_(seed), opt_(net.params(), nn::AdamConfig{.lr = config_.lr}) {
  if (config_.batch_size <= 0) throw InvalidInput("pose net: batch size must be positive");
  if (config_.reg_weight < 0.0) throw InvalidInput("pose net: negative regularizer weight");
}

PoseStepLog PoseTrainer::step(const std::vector<PoseExample>& data) {
  if (data.empty()) throw InvalidInput("pose net: empty dataset");
  const auto idx = nn::batch_indices(seed_, steps_, static_cast<int>(data.size()), config_.batch_size);
  const MapGeometry geo = net_->config().geometry();
  std::vector<const ImageGrid*> crops;
  std::vector<PoseTarget> targets;
  for (int i : idx) {
    crops.push_back(&data[i].crop);
    targets.push_back(render_target_maps(data[i].joints, geo));
  }
  std::vector<const PoseTarget*> target_ptrs;
  for (const auto& t : targets) target_ptrs.push_back(&t);

  opt_.set_lr(config_.lr_at(steps_));
  net_->params().zero_grad();
  const PoseLosses loss = shpe_loss(net_->forward(nn::stack_grids(crops)), target_ptrs, &net_->params(),
                                    config_.reg_weight);
  nn::backward(loss.total);
  opt_.step();
  PoseStepLog log{steps_, loss.heat.item(), loss.loc.item(), loss.delta.item(), loss.reg.item(), loss.total.item()};
  ++steps_;
  return log;
}

std::vector<PoseStepLog> PoseTrainer::run(const std::vector<PoseExample>& data, std::ostream* csv) {
  std::vector<PoseStepLog> logs;
  if (csv && steps_ == 0) write_log_header(*csv, nullptr);
  while (steps_ < config_.steps) {
    logs.push_back(step(data));
    if (csv) write_log_row(*csv, logs.back());
  }
  return logs;
}

nn::Checkpoint PoseTrainer::state() const {
  nn::Checkpoint ck = net_->to_checkpoint();
  ck.config["trainer"] = config_.to_json();
  ck.config["steps"] = steps_;
  opt_.save_state(ck, "optimizer/");
  return ck;
}

void PoseTrainer::restore(const nn::Checkpoint& ck) {
  nn::import_params(net_->params(), ck);
  opt_.load_state(ck, "optimizer/");
  steps_ = ck.config.at("steps").get<long>();
}

}  // namespace hdr::shpe
