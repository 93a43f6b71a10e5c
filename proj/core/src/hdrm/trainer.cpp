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
#include "hdr/hdrm/trainer.hpp"

#include <iostream>

#include "hdr/core/error.hpp"
#include "hdr/nn/grid.hpp"
#include "hdr/nn/ops.hpp"

namespace hdr::hdrm {

using nn::Tensor;

nlohmann::json HdrTrainConfig::to_json() const {
  return {{"stage1_steps", stage1_steps},
          {"stage2_steps", stage2_steps},
          {"batch_size", batch_size},
          {"lr_stage1", lr_stage1},
          {"lr_stage2", lr_stage2},
          {"lr_discriminator", lr_discriminator},
          {"weights", {weights.gan, weights.l1, weights.perceptual, weights.style}},
          {"discriminator_widths", discriminator_widths},
          {"feature_widths", feature_widths}};
}

HdrTrainConfig HdrTrainConfig::from_json(const nlohmann::json& j) {
  HdrTrainConfig c;
  c.stage1_steps = j.value("stage1_steps", c.stage1_steps);
  c.stage2_steps = j.value("stage2_steps", c.stage2_steps);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.lr_stage1 = j.value("lr_stage1", c.lr_stage1);
  c.lr_stage2 = j.value("lr_stage2", c.lr_stage2);
  c.lr_discriminator = j.value("lr_discriminator", c.lr_discriminator);
  if (j.contains("weights")) {
    const auto w = j.at("weights").get<std::vector<double>>();
    if (w.size() != 4) throw InvalidInput("hdrm weights: expected 4 values");
    c.weights = {w[0], w[1], w[2], w[3]};
  }
  c.discriminator_widths = j.value("discriminator_widths", c.discriminator_widths);
  c.feature_widths = j.value("feature_widths", c.feature_widths);
  return c;
}

void write_log_header(std::ostream& os, const HdrStepLog*) {
  os << "step,stage,l1,perceptual,style,gan_generator,gan_discriminator,total\n";
}

void write_log_row(std::ostream& os, const HdrStepLog& r) {
  os << r.step << ',' << r.stage << ',' << r.l1 << ',' << r.perceptual << ',' << r.style << ',' << r.gan_generator
     << ',' << r.gan_discriminator << ',' << r.total << '\n';
}

HdrTrainer::HdrTrainer(HdrNet& net, HdrTrainConfig config, RngSeed seed)
    : net_(&net),
      config_(std::move(config)),
      seed_(seed),
      disc_(config_.discriminator_widths, derive_seed(seed, 1)),
      phi_(derive_seed(seed, 2), config_.feature_widths),
      opt_g_(net.params(), nn::AdamConfig{.lr = config_.lr_stage1}),
      opt_d_(disc_.params(), nn::AdamConfig{.lr = config_.lr_discriminator, .beta1 = 0.5}) {
  config_.weights.validate();
  if (config_.batch_size <= 0) throw InvalidInput("hdrm: batch size must be positive");
}

HdrStepLog HdrTrainer::step(const std::vector<HdrExample>& data, int stage) {
  if (data.empty()) throw InvalidInput("hdrm: empty dataset");
  const auto idx = nn::batch_indices(derive_seed(seed_, 3), steps_, static_cast<int>(data.size()), config_.batch_size);
  std::vector<const maskops::HdrInput*> inputs;
  std::vector<const ImageGrid*> targets;
  for (int i : idx) {
    inputs.push_back(&data[i].input);
    targets.push_back(&data[i].target);
  }
  const HdrBatch batch = make_batch(inputs);
  const Tensor target = nn::stack_grids(targets);
  const auto& w = config_.weights;
  const bool adversarial = w.gan > 0.0;

  opt_g_.set_lr(stage == 1 ? config_.lr_stage1 : config_.lr_stage2);
  net_->params().zero_grad();
  const HdrForward out = net_->forward(batch);
  // Every term is evaluated on the composite: pixels outside the hole are
  // copied from the input, so only the filled region is trained.
  const auto target_feats = phi_(target);
  const auto comp_feats = phi_(out.composite);
  const Tensor l1 = l1_loss(out.composite, target);
  const Tensor perc = perceptual_loss(comp_feats, target_feats);
  const Tensor style = style_loss(comp_feats, target_feats);
  const Tensor gan = adversarial ? generator_gan_term(disc_(out.composite)) : Tensor::zeros({1});
  const Tensor total = total_loss(gan, l1, perc, style, w);
  nn::backward(total);
  opt_g_.step();

  HdrStepLog log{steps_, stage, l1.item(), perc.item(), style.item(), gan.item(), 0.0, total.item()};
  if (adversarial) {
    disc_.params().zero_grad();
    const Tensor d = discriminator_term(disc_(target), disc_(out.composite.detach()));
    nn::backward(d);
    opt_d_.step();
    log.gan_discriminator = d.item();
  }
  ++steps_;
  return log;
}

std::vector<HdrStepLog> HdrTrainer::run(const std::vector<HdrExample>& stage1, const std::vector<HdrExample>* stage2,
                                        std::ostream* csv) {
  std::vector<HdrStepLog> logs;
  auto record = [&](const HdrStepLog& r) {
    logs.push_back(r);
    if (csv) write_log_row(*csv, r);
  };
  if (csv && steps_ == 0) write_log_header(*csv, nullptr);
  while (steps_ < config_.stage1_steps) record(step(stage1, 1));
  if (config_.stage2_steps > 0 && stage2 == nullptr) {
    std::cerr << "warning: no segmenter masks available, skipping the second training stage\n";
    return logs;
  }
  while (steps_ < config_.stage1_steps + config_.stage2_steps) record(step(*stage2, 2));
  return logs;
}

nn::Checkpoint HdrTrainer::state() const {
  nn::Checkpoint ck = net_->to_checkpoint();
  ck.config["trainer"] = config_.to_json();
  ck.config["steps"] = steps_;
  nn::export_params(disc_.params(), ck, "discriminator/");
  opt_g_.save_state(ck, "generator/");
  opt_d_.save_state(ck, "discriminator/");
  return ck;
}

void HdrTrainer::restore(const nn::Checkpoint& ck) {
  nn::import_params(net_->params(), ck);
  nn::import_params(disc_.params(), ck, "discriminator/");
  opt_g_.load_state(ck, "generator/");
  opt_d_.load_state(ck, "discriminator/");
  steps_ = ck.config.at("steps").get<long>();
}

}  // namespace hdr::hdrm
