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
#include "hdr/hdrm/losses.hpp"

#include <cmath>

#include "hdr/core/error.hpp"
#include "hdr/nn/ops.hpp"

namespace hdr::hdrm {

using nn::Tensor;

void LossWeights::validate() const {
  for (double w : {gan, l1, perceptual, style}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("loss weights must be finite and non-negative");
  }
}

Tensor l1_loss(const Tensor& out, const Tensor& target) { return nn::l1_mean(out, target); }

Tensor perceptual_loss(const std::vector<Tensor>& feats_a, const std::vector<Tensor>& feats_b) {
  if (feats_a.size() != feats_b.size() || feats_a.empty()) throw ShapeMismatch("perceptual_loss: stage count");
  Tensor total = nn::l1_mean(feats_a[0], feats_b[0]);
  for (std::size_t i = 1; i < feats_a.size(); ++i) total = nn::add(total, nn::l1_mean(feats_a[i], feats_b[i]));
  return total;
}

Tensor perceptual_loss(const Tensor& a, const Tensor& b, const FeatureExtractor& phi) {
  return perceptual_loss(phi(a), phi(b));
}

Tensor gram(const Tensor& f) {
  if (f.ndim() != 4) throw ShapeMismatch("gram: expected [N,C,H,W]");
  const int n = f.dim(0), c = f.dim(1), hw = f.dim(2) * f.dim(3);
  const Tensor flat = nn::reshape(f, {n, c, hw});
  return nn::scale(nn::bmm(flat, flat, true), 1.0 / (static_cast<double>(c) * hw));
}

Tensor style_loss(const std::vector<Tensor>& feats_a, const std::vector<Tensor>& feats_b) {
  if (feats_a.size() != feats_b.size() || feats_a.empty()) throw ShapeMismatch("style_loss: stage count");
  Tensor total = nn::l1_mean(gram(feats_a[0]), gram(feats_b[0]));
  for (std::size_t i = 1; i < feats_a.size(); ++i) {
    total = nn::add(total, nn::l1_mean(gram(feats_a[i]), gram(feats_b[i])));
  }
  return total;
}

Tensor style_loss(const Tensor& a, const Tensor& b, const FeatureExtractor& phi) {
  return style_loss(phi(a), phi(b));
}

// log(1 - sigmoid(z)) = -softplus(z); -log sigmoid(z) = softplus(-z).
Tensor generator_gan_term(const Tensor& fake_logits) { return nn::scale(nn::mean(nn::softplus(fake_logits)), -1.0); }

Tensor discriminator_term(const Tensor& real_logits, const Tensor& fake_logits) {
  return nn::add(nn::mean(nn::softplus(nn::scale(real_logits, -1.0))), nn::mean(nn::softplus(fake_logits)));
}

Tensor total_loss(const Tensor& gan, const Tensor& l1, const Tensor& perceptual, const Tensor& style,
                  const LossWeights& w) {
  w.validate();
  Tensor t = nn::add(nn::scale(gan, w.gan), nn::scale(l1, w.l1));
  t = nn::add(t, nn::scale(perceptual, w.perceptual));
  return nn::add(t, nn::scale(style, w.style));
}

double total_loss(double gan, double l1, double perceptual, double style, const LossWeights& w) {
  w.validate();
  return w.gan * gan + w.l1 * l1 + w.perceptual * perceptual + w.style * style;
}

double masked_l1(const ImageGrid& a, const ImageGrid& b, const ImageGrid& mask) {
  if (!a.same_shape(b) || !a.same_extent(mask) || mask.channels() != 1) throw ShapeMismatch("masked_l1");
  const int hw = a.height() * a.width();
  double sum = 0.0;
  long count = 0;
  for (int p = 0; p < hw; ++p) {
    if (mask.values()[p] < 0.5f) continue;
    for (int c = 0; c < a.channels(); ++c) {
      sum += std::abs(static_cast<double>(a.values()[c * hw + p]) - b.values()[c * hw + p]);
      ++count;
    }
  }
  return count ? sum / count : 0.0;
}

}  // namespace hdr::hdrm
