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

#include <cmath>
#include <functional>
#include <vector>

#include "hdr/core/image.hpp"
#include "hdr/core/rng.hpp"
#include "hdr/core/types.hpp"
#include "hdr/maskops/maskops.hpp"
#include "hdr/nn/tensor.hpp"

namespace hdr::testing {

inline ImageGrid random_grid(Rng& rng, int h, int w, int c) {
  std::vector<float> v(static_cast<std::size_t>(h) * w * c);
  for (float& x : v) x = static_cast<float>(rng.uniform());
  return ImageGrid(h, w, c, std::move(v));
}

inline ImageGrid random_binary(Rng& rng, int h, int w, double p = 0.5) {
  std::vector<float> v(static_cast<std::size_t>(h) * w);
  for (float& x : v) x = rng.bernoulli(p) ? 1.0f : 0.0f;
  return ImageGrid(h, w, 1, std::move(v));
}

/// A quad with m_rv within m_ra, m_lv within m_la and disjoint visible masks:
/// the left hand is nearer wherever both amodal masks overlap with
/// probability 1/2 per pixel.
inline MaskQuad random_consistent_quad(Rng& rng, int h, int w) {
  const ImageGrid ra = random_binary(rng, h, w, 0.4);
  const ImageGrid la = random_binary(rng, h, w, 0.4);
  std::vector<float> rv(ra.size()), lv(ra.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const bool r = ra.values()[i] > 0.5f, l = la.values()[i] > 0.5f;
    const bool left_front = rng.bernoulli(0.5);
    rv[i] = (r && (!l || !left_front)) ? 1.0f : 0.0f;
    lv[i] = (l && (!r || left_front)) ? 1.0f : 0.0f;
  }
  return MaskQuad{ra, ImageGrid(h, w, 1, std::move(rv)), la, ImageGrid(h, w, 1, std::move(lv))};
}

inline int count_ones(const ImageGrid& m) {
  int n = 0;
  for (float v : m.values()) n += v > 0.5f ? 1 : 0;
  return n;
}

inline nn::Tensor random_tensor(Rng& rng, const nn::Shape& shape, double lo = -1.0, double hi = 1.0,
                                bool requires_grad = true) {
  std::vector<double> v(nn::numel(shape));
  for (double& x : v) x = rng.uniform(lo, hi);
  return nn::Tensor::make(shape, std::move(v), requires_grad);
}

/// Norm-wise relative error ||analytic - numeric|| / max(||analytic||, ||numeric||)
/// between backprop gradients and central differences for every input.
inline double gradient_rel_error(const std::function<nn::Tensor(const std::vector<nn::Tensor>&)>& f,
                                 std::vector<nn::Tensor> inputs, double step) {
  for (auto& t : inputs) t.zero_grad();
  nn::backward(f(inputs));
  double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
  for (auto& t : inputs) {
    if (!t.requires_grad()) continue;
    const std::vector<double> analytic(t.grad().begin(), t.grad().end());
    auto data = t.mutable_data();
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double orig = data[i];
      data[i] = orig + step;
      double up = 0.0, down = 0.0;
      {
        nn::NoGradGuard guard;
        up = f(inputs).item();
        data[i] = orig - step;
        down = f(inputs).item();
      }
      data[i] = orig;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic.empty() ? 0.0 : analytic[i];
      diff2 += (a - numeric) * (a - numeric);
      a2 += a * a;
      n2 += numeric * numeric;
    }
  }
  const double denom = std::max(std::sqrt(a2), std::sqrt(n2));
  return denom > 0.0 ? std::sqrt(diff2) / denom : std::sqrt(diff2);
}

/// A two-ellipse scene: a gradient background, the target (right-role) hand
/// as one ellipse and a distractor ellipse drawn in front of it. Returns the
/// composite crop, its masks and the target-only image.
struct ToyScene {
  ImageGrid image;
  MaskQuad masks;
  ImageGrid target;
};

inline ToyScene toy_scene(Rng& rng, int size, bool with_distractor = true) {
  const double s = size;
  const double rx = rng.uniform(0.45, 0.55) * s, ry = rng.uniform(0.4, 0.5) * s;
  const double ax = rng.uniform(0.28, 0.36) * s, ay = rng.uniform(0.18, 0.26) * s;
  const double lx = rng.uniform(0.55, 0.7) * s, ly = rng.uniform(0.35, 0.6) * s;
  const double bx = rng.uniform(0.12, 0.18) * s, by = rng.uniform(0.12, 0.2) * s;
  const float skin[3] = {static_cast<float>(rng.uniform(0.6, 0.9)), static_cast<float>(rng.uniform(0.4, 0.6)),
                         static_cast<float>(rng.uniform(0.3, 0.5))};
  const float other[3] = {static_cast<float>(rng.uniform(0.5, 0.8)), static_cast<float>(rng.uniform(0.3, 0.5)),
                          static_cast<float>(rng.uniform(0.2, 0.4))};
  const std::size_t plane = static_cast<std::size_t>(size) * size;
  std::vector<float> bg(3 * plane), img(3 * plane), tgt(3 * plane);
  std::vector<float> ra(plane), rv(plane), la(plane), lv(plane);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * size + x;
      const bool r = std::pow((x + 0.5 - rx) / ax, 2) + std::pow((y + 0.5 - ry) / ay, 2) <= 1.0;
      const bool l = with_distractor && std::pow((x + 0.5 - lx) / bx, 2) + std::pow((y + 0.5 - ly) / by, 2) <= 1.0;
      ra[p] = r;
      la[p] = l;
      lv[p] = l;
      rv[p] = r && !l;
      for (int c = 0; c < 3; ++c) {
        const float b = static_cast<float>(0.2 + 0.3 * (c == 0 ? x : y) / s);
        bg[c * plane + p] = b;
        tgt[c * plane + p] = r ? skin[c] : b;
        img[c * plane + p] = l ? other[c] : tgt[c * plane + p];
      }
    }
  auto grid = [&](std::vector<float>& v, int c) { return ImageGrid(size, size, c, std::move(v)); };
  return {grid(img, 3), MaskQuad{grid(ra, 1), grid(rv, 1), grid(la, 1), grid(lv, 1)}, grid(tgt, 3)};
}

}  // namespace hdr::testing
