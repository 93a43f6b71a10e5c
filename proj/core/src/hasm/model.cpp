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
#include "hdr/hasm/model.hpp"

#include <algorithm>

#include "hdr/core/error.hpp"
#include "hdr/nn/grid.hpp"
#include "hdr/nn/ops.hpp"

namespace hdr::hasm {

using nn::Tensor;

namespace {

constexpr double kProbEps = 1e-7;

ImageGrid quad_channel(const Tensor& t, int index, int channel) {
  const int h = t.dim(2), w = t.dim(3);
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  const double* src = t.data().data() + (static_cast<std::size_t>(index) * t.dim(1) + channel) * plane;
  std::vector<float> v(plane);
  for (std::size_t i = 0; i < plane; ++i) {
    v[i] = static_cast<float>(std::clamp(src[i], kProbEps, 1.0 - kProbEps));
  }
  return ImageGrid(h, w, 1, std::move(v));
}

}  // namespace

SegModelConfig SegModelConfig::fast() {
  SegModelConfig c;
  c.input_size = 64;
  c.encoder_widths = {16, 32, 48, 64};
  c.head_channels = 16;
  return c;
}

void SegModelConfig::validate() const {
  if (num_heads != kNumHeads) throw InvalidInput("segmenter: exactly four heads are supported");
  if (encoder_widths.size() != 4 || encoder_depths.size() != 4) {
    throw InvalidInput("segmenter: expected four encoder stages");
  }
  if (input_size <= 0 || input_size % kStride != 0) {
    throw InvalidInput("segmenter: input size must be a multiple of " + std::to_string(kStride));
  }
  for (int i = 0; i < 4; ++i) {
    if (encoder_widths[i] <= 0 || encoder_depths[i] < 0) throw InvalidInput("segmenter: bad stage shape");
  }
  if (head_channels <= 0) throw InvalidInput("segmenter: head channels must be positive");
}

nlohmann::json SegModelConfig::to_json() const {
  return {{"input_size", input_size},
          {"encoder_widths", encoder_widths},
          {"encoder_depths", encoder_depths},
          {"head_channels", head_channels},
          {"num_heads", num_heads}};
}

SegModelConfig SegModelConfig::from_json(const nlohmann::json& j) {
  SegModelConfig c;
  c.input_size = j.value("input_size", c.input_size);
  c.encoder_widths = j.value("encoder_widths", c.encoder_widths);
  c.encoder_depths = j.value("encoder_depths", c.encoder_depths);
  c.head_channels = j.value("head_channels", c.head_channels);
  c.num_heads = j.value("num_heads", c.num_heads);
  return c;
}

MaskQuad enforce_containment(const MaskQuad& soft, double threshold) {
  soft.check_shape();
  MaskQuad out = soft.binarized(threshold);
  const std::size_t n = out.m_ra.size();
  std::vector<float> rv(n), lv(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool r = out.m_rv.values()[i] > 0.5f && out.m_ra.values()[i] > 0.5f;
    bool l = out.m_lv.values()[i] > 0.5f && out.m_la.values()[i] > 0.5f;
    if (r && l) {
      const bool right_wins = soft.m_rv.values()[i] >= soft.m_lv.values()[i];
      r = right_wins;
      l = !right_wins;
    }
    rv[i] = r ? 1.0f : 0.0f;
    lv[i] = l ? 1.0f : 0.0f;
  }
  const int h = out.m_ra.height(), w = out.m_ra.width();
  out.m_rv = ImageGrid(h, w, 1, std::move(rv));
  out.m_lv = ImageGrid(h, w, 1, std::move(lv));
  return out;
}

SegModel::SegModel(SegModelConfig config, RngSeed seed) : config_(std::move(config)) {
  config_.validate();
  Rng rng(seed);
  const auto& w = config_.encoder_widths;
  stem_ = nn::Conv2d(params_, "stem", 3, w[0], 7, 4, 3, rng);
  blocks_.resize(4);
  for (int s = 0; s < 4; ++s) {
    if (s > 0) down_.emplace_back(params_, "down" + std::to_string(s), w[s - 1], w[s], 3, 2, 1, rng);
    for (int d = 0; d < config_.encoder_depths[s]; ++d) {
      blocks_[s].emplace_back(params_, "stage" + std::to_string(s) + ".block" + std::to_string(d), w[s], w[s], 3, 1, 1,
                              rng);
    }
  }
  const int hc = config_.head_channels;
  for (int h = 0; h < kNumHeads; ++h) {
    const std::string name = std::string("head_") + kHeadNames[h];
    Head head;
    for (int s = 0; s < 4; ++s) {
      head.project.emplace_back(params_, name + ".proj" + std::to_string(s), w[s], hc, 1, 1, 0, rng);
    }
    head.fuse = nn::Conv2d(params_, name + ".fuse", 4 * hc, hc, 1, 1, 0, rng);
    head.classify = nn::Conv2d(params_, name + ".cls", hc, 1, 1, 1, 0, rng);
    heads_.push_back(std::move(head));
  }
}

Tensor SegModel::forward(const Tensor& images) const {
  const int s = config_.input_size;
  if (images.ndim() != 4 || images.dim(1) != 3 || images.dim(2) != s || images.dim(3) != s) {
    throw ShapeMismatch("segmenter: expected [N,3," + std::to_string(s) + "," + std::to_string(s) + "], got " +
                        nn::shape_string(images.shape()));
  }
  std::vector<Tensor> stages;
  Tensor x = nn::relu(stem_(images));
  for (int st = 0; st < 4; ++st) {
    if (st > 0) x = nn::relu(down_[st - 1](x));
    for (const auto& block : blocks_[st]) x = nn::relu(nn::add(x, block(x)));
    stages.push_back(x);
  }
  const int quarter = s / 4;
  std::vector<Tensor> outs;
  for (const auto& head : heads_) {
    std::vector<Tensor> parts;
    for (int st = 0; st < 4; ++st) {
      Tensor p = head.project[st](stages[st]);
      if (p.dim(2) != quarter) p = nn::upsample_bilinear(p, quarter, quarter);
      parts.push_back(p);
    }
    Tensor logits = head.classify(nn::relu(head.fuse(nn::concat_channels(parts))));
    outs.push_back(nn::upsample_bilinear(logits, s, s));
  }
  return nn::sigmoid(nn::concat_channels(outs));
}

SegPrediction SegModel::predict(const ImageGrid& image) const {
  if (image.channels() != 3) throw ShapeMismatch("segmenter: expected a 3-channel image");
  nn::NoGradGuard guard;
  const Tensor p = forward(nn::grid_tensor(image));
  SegPrediction out;
  out.soft = MaskQuad{quad_channel(p, 0, 0), quad_channel(p, 0, 1), quad_channel(p, 0, 2), quad_channel(p, 0, 3)};
  out.binary = enforce_containment(out.soft);
  return out;
}

nn::Checkpoint SegModel::to_checkpoint() const {
  nn::Checkpoint ck;
  ck.config = {{"kind", "segmenter"}, {"model", config_.to_json()}};
  nn::export_params(params_, ck);
  return ck;
}

SegModel SegModel::from_checkpoint(const nn::Checkpoint& ckpt) {
  if (ckpt.config.value("kind", "") != "segmenter") throw InvalidInput("checkpoint is not a segmenter checkpoint");
  SegModel m(SegModelConfig::from_json(ckpt.config.at("model")), RngSeed{0});
  nn::import_params(m.params_, ckpt);
  return m;
}

Tensor bce_loss(const Tensor& pred, const Tensor& target) { return nn::bce_mean(pred, target, kProbEps); }

HeadLosses has_loss(const Tensor& pred, const Tensor& target) {
  if (pred.shape() != target.shape() || pred.ndim() != 4 || pred.dim(1) != kNumHeads) {
    throw ShapeMismatch("has_loss: expected matching [N,4,H,W] tensors, got " + nn::shape_string(pred.shape()) +
                        " and " + nn::shape_string(target.shape()));
  }
  HeadLosses out;
  for (int h = 0; h < kNumHeads; ++h) {
    out.per_head[h] = bce_loss(nn::slice_channels(pred, h, h + 1), nn::slice_channels(target, h, h + 1));
    out.total = h == 0 ? out.per_head[h] : nn::add(out.total, out.per_head[h]);
  }
  return out;
}

Tensor stack_quads(const std::vector<const MaskQuad*>& quads) {
  std::vector<const ImageGrid*> grids;
  for (const MaskQuad* q : quads) {
    q->check_shape();
    for (const ImageGrid* g : {&q->m_ra, &q->m_rv, &q->m_la, &q->m_lv}) grids.push_back(g);
  }
  const Tensor flat = nn::stack_grids(grids);
  return nn::reshape(flat, {static_cast<int>(quads.size()), kNumHeads, flat.dim(2), flat.dim(3)});
}

}  // namespace hdr::hasm
