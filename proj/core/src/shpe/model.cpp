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
#include "hdr/shpe/model.hpp"

#include <iostream>

#include "hdr/core/error.hpp"
#include "hdr/nn/grid.hpp"
#include "hdr/nn/ops.hpp"

namespace hdr::shpe {

using nn::Tensor;

PoseNetConfig PoseNetConfig::fast() {
  PoseNetConfig c;
  c.input_size = 64;
  c.widths = {16, 32, 48};
  return c;
}

MapGeometry PoseNetConfig::geometry() const {
  return MapGeometry{.map_size = map_size(), .input_size = input_size, .sigma = sigma, .depth_scale_mm = depth_scale_mm};
}

void PoseNetConfig::validate() const {
  if (input_size <= 0 || input_size % kStride != 0) {
    throw InvalidInput("pose net: input size must be a multiple of " + std::to_string(kStride));
  }
  if (widths.size() != 3) throw InvalidInput("pose net: expected three stage widths");
  for (int w : widths) {
    if (w <= 0) throw InvalidInput("pose net: widths must be positive");
  }
  if (blocks < 0) throw InvalidInput("pose net: negative block count");
  geometry().validate();
}

nlohmann::json PoseNetConfig::to_json() const {
  return {{"input_size", input_size},
          {"widths", widths},
          {"blocks", blocks},
          {"sigma", sigma},
          {"depth_scale_mm", depth_scale_mm}};
}

PoseNetConfig PoseNetConfig::from_json(const nlohmann::json& j) {
  PoseNetConfig c;
  c.input_size = j.value("input_size", c.input_size);
  c.widths = j.value("widths", c.widths);
  c.blocks = j.value("blocks", c.blocks);
  c.sigma = j.value("sigma", c.sigma);
  c.depth_scale_mm = j.value("depth_scale_mm", c.depth_scale_mm);
  return c;
}

PoseNet::PoseNet(PoseNetConfig config, RngSeed seed) : config_(std::move(config)) {
  config_.validate();
  Rng rng(seed);
  const auto& w = config_.widths;
  int in = 3;
  for (int i = 0; i < 3; ++i) {
    down_.emplace_back(params_, "down" + std::to_string(i), in, w[i], 3, 2, 1, rng);
    in = w[i];
  }
  for (int b = 0; b < config_.blocks; ++b) {
    for (int k = 0; k < 2; ++k) {
      blocks_.emplace_back(params_, "block" + std::to_string(b) + ".conv" + std::to_string(k), in, in, 3, 1, 1, rng);
    }
  }
  heat_hidden_ = nn::Conv2d(params_, "heat.hidden", in, in, 3, 1, 1, rng);
  heat_out_ = nn::Conv2d(params_, "heat.out", in, kNumJoints, 1, 1, 0, rng);
  delta_hidden_ = nn::Conv2d(params_, "delta.hidden", in + kNumJoints, in, 3, 1, 1, rng);
  delta_out_ = nn::Conv2d(params_, "delta.out", in, kDeltaChannels, 1, 1, 0, rng);
  loc_hidden_ = nn::Conv2d(params_, "loc.hidden", in + kNumJoints + kDeltaChannels, in, 3, 1, 1, rng);
  loc_out_ = nn::Conv2d(params_, "loc.out", in, kLocChannels, 1, 1, 0, rng);
}

Tensor PoseNet::forward(const Tensor& images) const {
  const int s = config_.input_size;
  if (images.ndim() != 4 || images.dim(1) != 3 || images.dim(2) != s || images.dim(3) != s) {
    throw ShapeMismatch("pose net: expected [N,3," + std::to_string(s) + "," + std::to_string(s) + "], got " +
                        nn::shape_string(images.shape()));
  }
  Tensor x = images;
  for (const auto& conv : down_) x = nn::relu(conv(x));
  for (std::size_t b = 0; b + 1 < blocks_.size(); b += 2) {
    x = nn::relu(nn::add(x, blocks_[b + 1](nn::relu(blocks_[b](x)))));
  }
  const Tensor heat = nn::sigmoid(heat_out_(nn::relu(heat_hidden_(x))));
  const Tensor delta = delta_out_(nn::relu(delta_hidden_(nn::concat_channels({x, heat}))));
  const Tensor loc = loc_out_(nn::relu(loc_hidden_(nn::concat_channels({x, heat, delta}))));
  return nn::concat_channels({heat, loc, delta});
}

PoseMaps PoseNet::predict(const ImageGrid& crop) const {
  if (crop.channels() != 3) throw ShapeMismatch("pose net: expected a 3-channel crop");
  nn::NoGradGuard guard;
  const Tensor out = forward(nn::grid_tensor(crop));
  return PoseMaps::from_stacked(out.dim(2), out.data().data());
}

nn::Checkpoint PoseNet::to_checkpoint() const {
  nn::Checkpoint ck;
  ck.config = {{"kind", "posenet"}, {"model", config_.to_json()}};
  nn::export_params(params_, ck);
  return ck;
}

PoseNet PoseNet::from_checkpoint(const nn::Checkpoint& ckpt) {
  if (ckpt.config.value("kind", "") != "posenet") throw InvalidInput("checkpoint is not a pose net checkpoint");
  PoseNet net(PoseNetConfig::from_json(ckpt.config.at("model")), RngSeed{0});
  nn::import_params(net.params_, ckpt);
  return net;
}

PoseLosses shpe_loss(const Tensor& pred, const std::vector<const PoseTarget*>& targets, const nn::ParamStore* params,
                     double reg_weight) {
  if (pred.ndim() != 4 || pred.dim(1) != kMapChannels || pred.dim(0) != static_cast<int>(targets.size())) {
    throw ShapeMismatch("shpe_loss: expected [" + std::to_string(targets.size()) + "," +
                        std::to_string(kMapChannels) + ",S,S], got " + nn::shape_string(pred.shape()));
  }
  const int n = pred.dim(0), s = pred.dim(2);
  std::vector<double> heat_t, loc_t, delta_t, heat_w, loc_w, delta_w;
  bool any_valid = false;
  for (const PoseTarget* t : targets) {
    if (t->maps.size != s || pred.dim(3) != s) throw ShapeMismatch("shpe_loss: map size mismatch");
    heat_t.insert(heat_t.end(), t->maps.heat.begin(), t->maps.heat.end());
    loc_t.insert(loc_t.end(), t->maps.loc.begin(), t->maps.loc.end());
    delta_t.insert(delta_t.end(), t->maps.delta.begin(), t->maps.delta.end());
    heat_w.insert(heat_w.end(), t->heat_weight.begin(), t->heat_weight.end());
    loc_w.insert(loc_w.end(), t->loc_weight.begin(), t->loc_weight.end());
    delta_w.insert(delta_w.end(), t->delta_weight.begin(), t->delta_weight.end());
    for (bool v : t->valid) any_valid = any_valid || v;
  }
  if (!any_valid) std::cerr << "warning: no valid joints in pose batch, loss is zero\n";

  PoseLosses out;
  const int lo = kNumJoints, hi = kNumJoints + kLocChannels;
  out.heat = nn::weighted_mse(nn::slice_channels(pred, 0, lo),
                              Tensor::make({n, kNumJoints, s, s}, std::move(heat_t)), heat_w);
  out.loc = nn::weighted_mse(nn::slice_channels(pred, lo, hi),
                             Tensor::make({n, kLocChannels, s, s}, std::move(loc_t)), loc_w);
  out.delta = nn::weighted_mse(nn::slice_channels(pred, hi, kMapChannels),
                               Tensor::make({n, kDeltaChannels, s, s}, std::move(delta_t)), delta_w);
  out.reg = params ? nn::scale(params->l2_sum(), reg_weight) : Tensor::zeros({1});
  out.total = nn::add(nn::add(out.heat, out.loc), nn::add(out.delta, out.reg));
  return out;
}

}  // namespace hdr::shpe
