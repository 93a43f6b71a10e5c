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
#include "hdr/hdrm/model.hpp"

#include <algorithm>

#include "hdr/core/error.hpp"
#include "hdr/nn/grid.hpp"
#include "hdr/nn/ops.hpp"

namespace hdr::hdrm {

using nn::Tensor;

namespace {

constexpr int kInputChannels = 8;
constexpr double kLeakySlope = 0.2;

// 1 for every sample that has at least one valid pixel.
Tensor any_valid(const Tensor& validity, int h, int w) {
  const int n = validity.dim(0);
  const std::size_t plane = static_cast<std::size_t>(validity.dim(2)) * validity.dim(3);
  std::vector<double> out(static_cast<std::size_t>(n) * h * w, 0.0);
  for (int b = 0; b < n; ++b) {
    const auto* p = validity.data().data() + b * plane;
    if (std::any_of(p, p + plane, [](double v) { return v > 0.0; })) {
      std::fill(out.begin() + static_cast<std::ptrdiff_t>(b) * h * w,
                out.begin() + static_cast<std::ptrdiff_t>(b + 1) * h * w, 1.0);
    }
  }
  return Tensor::make({n, 1, h, w}, std::move(out));
}

// Collapses a per-channel validity to one channel: known if any channel is.
Tensor any_channel(const Tensor& validity) {
  const int n = validity.dim(0), c = validity.dim(1);
  const std::size_t plane = static_cast<std::size_t>(validity.dim(2)) * validity.dim(3);
  std::vector<double> out(n * plane, 0.0);
  for (int b = 0; b < n; ++b)
    for (int ch = 0; ch < c; ++ch)
      for (std::size_t p = 0; p < plane; ++p) {
        out[b * plane + p] = std::max(out[b * plane + p], validity.data()[(b * c + ch) * plane + p]);
      }
  return Tensor::make({n, 1, validity.dim(2), validity.dim(3)}, std::move(out));
}

Tensor union_of(const Tensor& a, const Tensor& b) {
  std::vector<double> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(a.data()[i], b.data()[i]);
  return Tensor::make(a.shape(), std::move(out));
}

// Upsamples the deeper stage and concatenates it with the skip connection.
MaskedFeatures merge(const MaskedFeatures& deep, const MaskedFeatures& skip) {
  const int factor = skip.features.dim(2) / deep.features.dim(2);
  MaskedFeatures up{nn::upsample_nearest(deep.features, factor), nn::upsample_nearest(deep.validity, factor)};
  return {nn::concat_channels({up.features, skip.features}), union_of(up.validity, skip.validity)};
}

}  // namespace

HdrNetConfig HdrNetConfig::fast() {
  HdrNetConfig c;
  c.input_size = 64;
  c.widths = {16, 24, 32, 48};
  return c;
}

void HdrNetConfig::validate() const {
  if (widths.size() != 4) throw InvalidInput("hdrnet: expected 4 encoder widths");
  if (input_size <= 0 || input_size % 8 != 0) throw InvalidInput("hdrnet: input size must be a multiple of 8");
  if (heads <= 0 || widths.back() % heads != 0) throw InvalidInput("hdrnet: bottleneck width not divisible by heads");
  if (attention_reduction <= 0 || (input_size / 8) % attention_reduction != 0) {
    throw InvalidInput("hdrnet: attention reduction must divide the bottleneck size");
  }
  for (int w : widths)
    if (w <= 0) throw InvalidInput("hdrnet: widths must be positive");
}

nlohmann::json HdrNetConfig::to_json() const {
  return {{"input_size", input_size},
          {"widths", widths},
          {"transformer_blocks", transformer_blocks},
          {"heads", heads},
          {"mlp_ratio", mlp_ratio},
          {"attention_reduction", attention_reduction}};
}

HdrNetConfig HdrNetConfig::from_json(const nlohmann::json& j) {
  HdrNetConfig c;
  c.input_size = j.value("input_size", c.input_size);
  c.widths = j.value("widths", c.widths);
  c.transformer_blocks = j.value("transformer_blocks", c.transformer_blocks);
  c.heads = j.value("heads", c.heads);
  c.mlp_ratio = j.value("mlp_ratio", c.mlp_ratio);
  c.attention_reduction = j.value("attention_reduction", c.attention_reduction);
  return c;
}

HdrBatch make_batch(const std::vector<const maskops::HdrInput*>& inputs) {
  if (inputs.empty()) throw InvalidInput("hdrnet: empty batch");
  std::vector<const ImageGrid*> stacked, holes, known;
  std::vector<ImageGrid> hole_grids;
  hole_grids.reserve(inputs.size());
  for (const auto* in : inputs) {
    std::string why;
    if (!maskops::satisfies_invariants(*in, &why)) throw InvalidInput("hdrnet input: " + why);
    hole_grids.push_back(in->hole());
  }
  const int n = static_cast<int>(inputs.size());
  const int h = inputs[0]->m_d.height(), w = inputs[0]->m_d.width();
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  std::vector<double> x(n * kInputChannels * plane), validity(n * kInputChannels * plane), hole(n * plane), img(n * 3 * plane);
  for (int b = 0; b < n; ++b) {
    const auto& in = *inputs[b];
    if (in.m_d.height() != h || in.m_d.width() != w) throw ShapeMismatch("hdrnet: batch items differ in size");
    double* dst = x.data() + b * kInputChannels * plane;
    for (const ImageGrid* g : {&in.i_d, &in.m_rv, &in.i_r, &in.m_bv}) {
      std::copy(g->values().begin(), g->values().end(), dst);
      dst += g->size();
    }
    std::copy(in.i_d.values().begin(), in.i_d.values().end(), img.begin() + b * 3 * plane);
    // Each erased image is known outside its own region; the masks outside both.
    double* v = validity.data() + b * kInputChannels * plane;
    for (std::size_t p = 0; p < plane; ++p) {
      const double hd = in.m_d.values()[p] >= 0.5f ? 1.0 : 0.0, hr = in.m_r.values()[p] >= 0.5f ? 1.0 : 0.0;
      hole[b * plane + p] = hole_grids[b].values()[p] >= 0.5f ? 1.0 : 0.0;
      for (int c = 0; c < 3; ++c) {
        v[c * plane + p] = 1.0 - hd;
        v[(4 + c) * plane + p] = 1.0 - hr;
      }
      v[3 * plane + p] = v[7 * plane + p] = 1.0 - hole[b * plane + p];
    }
  }
  return {Tensor::make({n, kInputChannels, h, w}, std::move(x)),
          Tensor::make({n, kInputChannels, h, w}, std::move(validity)),
          Tensor::make({n, 1, h, w}, std::move(hole)), Tensor::make({n, 3, h, w}, std::move(img))};
}

HdrNet::HdrNet(HdrNetConfig config, RngSeed seed) : config_(std::move(config)) {
  config_.validate();
  Rng rng(seed);
  const auto& w = config_.widths;
  encoder_.emplace_back(params_, "enc0", kInputChannels, w[0], 5, 2, rng);
  encoder_.emplace_back(params_, "enc1", w[0], w[1], 3, 2, rng);
  encoder_.emplace_back(params_, "enc2", w[1], w[2], 3, 2, rng);
  encoder_.emplace_back(params_, "enc3", w[2], w[3], 3, 1, rng);
  for (int i = 0; i < config_.transformer_blocks; ++i) {
    blocks_.emplace_back(params_, "block" + std::to_string(i), w[3], config_.heads, config_.mlp_ratio,
                         config_.attention_reduction, rng);
  }
  const int last = std::max(8, w[0] / 2);
  decoder_.emplace_back(params_, "dec0", w[3] + w[1], w[1], 3, 1, rng);
  decoder_.emplace_back(params_, "dec1", w[1] + w[0], w[0], 3, 1, rng);
  decoder_.emplace_back(params_, "dec2", w[0] + kInputChannels, last, 3, 1, rng);
  head_ = nn::Conv2d(params_, "head", last, 3, 1, 1, 0, rng);
}

HdrForward HdrNet::forward(const HdrBatch& batch, std::vector<Tensor>* validity_trace) const {
  const int s = config_.input_size;
  if (batch.x.ndim() != 4 || batch.x.dim(1) != kInputChannels || batch.x.dim(2) != s || batch.x.dim(3) != s) {
    throw ShapeMismatch("hdrnet: expected [N,8," + std::to_string(s) + "," + std::to_string(s) + "], got " +
                        nn::shape_string(batch.x.shape()));
  }
  const MaskedFeatures input{nn::mul(batch.x, batch.validity), batch.validity};
  const MaskedFeatures input_skip{input.features, any_channel(batch.validity)};
  std::vector<MaskedFeatures> skips;
  MaskedFeatures cur = input;
  for (const auto& layer : encoder_) {
    cur = layer(cur);
    cur.features = nn::relu(cur.features);
    skips.push_back(cur);
  }
  // Attention spreads information across the whole map, so every location of a
  // sample with any known pixel counts as known afterwards.
  Tensor feat = cur.features;
  for (const auto& block : blocks_) feat = block(feat);
  const int hb = feat.dim(2), wb = feat.dim(3);
  const Tensor bottleneck_valid = any_valid(cur.validity, hb, wb);
  cur = {nn::mul_pixelwise(feat, bottleneck_valid), bottleneck_valid};
  if (validity_trace) validity_trace->push_back(cur.validity);

  const MaskedFeatures* skip_for[] = {&skips[1], &skips[0], &input_skip};
  for (std::size_t i = 0; i < decoder_.size(); ++i) {
    cur = decoder_[i](merge(cur, *skip_for[i]));
    cur.features = nn::leaky_relu(cur.features, kLeakySlope);
    if (validity_trace) validity_trace->push_back(cur.validity);
  }
  Tensor raw = nn::sigmoid(head_(cur.features));
  Tensor composite = nn::blend(raw, batch.known, batch.hole);
  return {raw, composite};
}

ImageGrid HdrNet::infer(const maskops::HdrInput& input) const {
  nn::NoGradGuard guard;
  return nn::to_grid(forward(make_batch({&input})).composite);
}

nn::Checkpoint HdrNet::to_checkpoint() const {
  nn::Checkpoint ck;
  ck.config = {{"kind", "hdrnet"}, {"model", config_.to_json()}};
  nn::export_params(params_, ck);
  return ck;
}

HdrNet HdrNet::from_checkpoint(const nn::Checkpoint& ckpt) {
  if (ckpt.config.value("kind", "") != "hdrnet") throw InvalidInput("checkpoint is not an hdrnet checkpoint");
  HdrNet net(HdrNetConfig::from_json(ckpt.config.at("model")), RngSeed{0});
  nn::import_params(net.params_, ckpt);
  return net;
}

FeatureExtractor::FeatureExtractor(RngSeed seed, std::vector<int> widths) {
  if (widths.empty()) throw InvalidInput("feature extractor: no stages");
  Rng rng(seed);
  nn::ParamStore scratch;
  int in = 3;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    nn::Conv2d conv(scratch, "phi" + std::to_string(i), in, widths[i], 3, i == 0 ? 1 : 2, 1, rng);
    conv.weight = conv.weight.detach();
    conv.bias = conv.bias.detach();
    convs_.push_back(conv);
    in = widths[i];
  }
}

std::vector<Tensor> FeatureExtractor::operator()(const Tensor& image) const {
  std::vector<Tensor> out;
  Tensor x = image;
  for (const auto& conv : convs_) {
    x = nn::gelu(conv(x));
    out.push_back(x);
  }
  return out;
}

PatchDiscriminator::PatchDiscriminator(std::vector<int> widths, RngSeed seed) : widths_(std::move(widths)) {
  if (widths_.size() != 3) throw InvalidInput("discriminator: expected 3 widths");
  Rng rng(seed);
  int in = 3;
  for (std::size_t i = 0; i < widths_.size(); ++i) {
    convs_.emplace_back(params_, "disc" + std::to_string(i), in, widths_[i], 4, 2, 1, rng);
    in = widths_[i];
  }
  convs_.emplace_back(params_, "disc_out", in, 1, 3, 1, 1, rng);
}

Tensor PatchDiscriminator::operator()(const Tensor& image) const {
  Tensor x = image;
  for (std::size_t i = 0; i + 1 < convs_.size(); ++i) x = nn::leaky_relu(convs_[i](x), kLeakySlope);
  return convs_.back()(x);
}

}  // namespace hdr::hdrm
