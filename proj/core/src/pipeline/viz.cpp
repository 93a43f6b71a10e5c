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
#include "hdr/pipeline/viz.hpp"

#include <algorithm>
#include <cmath>

#include "hdr/shpe/skeleton.hpp"

namespace hdr::pipeline {

namespace {

using Rgb = std::array<float, 3>;

class Canvas {
 public:
  Canvas(int h, int w) : h_(h), w_(w), v_(static_cast<std::size_t>(3) * h * w, 1.0f) {}

  void set(int x, int y, const Rgb& c) {
    if (x < 0 || y < 0 || x >= w_ || y >= h_) return;
    for (int ch = 0; ch < 3; ++ch) v_[(static_cast<std::size_t>(ch) * h_ + y) * w_ + x] = c[ch];
  }

  void blit(const ImageGrid& img, int x0) {
    for (int y = 0; y < img.height(); ++y)
      for (int x = 0; x < img.width(); ++x) set(x0 + x, y, {img.at(0, y, x), img.at(1, y, x), img.at(2, y, x)});
  }

  void line(double xa, double ya, double xb, double yb, const Rgb& c, int thickness) {
    const int steps = static_cast<int>(std::ceil(std::max(std::abs(xb - xa), std::abs(yb - ya)))) + 1;
    for (int i = 0; i <= steps; ++i) {
      const double t = static_cast<double>(i) / steps;
      dot(xa + t * (xb - xa), ya + t * (yb - ya), c, thickness);
    }
  }

  void dot(double x, double y, const Rgb& c, int radius) {
    const int cx = static_cast<int>(std::floor(x)), cy = static_cast<int>(std::floor(y));
    for (int dy = -radius / 2; dy <= radius / 2; ++dy)
      for (int dx = -radius / 2; dx <= radius / 2; ++dx) set(cx + dx, cy + dy, c);
  }

  ImageGrid finish() && { return ImageGrid(h_, w_, 3, std::move(v_)); }

 private:
  int h_, w_;
  std::vector<float> v_;
};

ImageGrid scaled(const ImageGrid& img, int h, int w) {
  return img.height() == h && img.width() == w ? img : resize(img, h, w);
}

ImageGrid mask_overlay(const ImageGrid& image, const MaskQuad& q) {
  const int h = image.height(), w = image.width();
  std::vector<float> v(static_cast<std::size_t>(3) * h * w);
  const Rgb right_visible{0.9f, 0.2f, 0.2f}, right_hidden{1.0f, 0.7f, 0.2f};
  const Rgb left_visible{0.2f, 0.4f, 0.95f}, left_hidden{0.3f, 0.9f, 0.9f};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const bool ra = q.m_ra.at(0, y, x) >= 0.5f, rv = q.m_rv.at(0, y, x) >= 0.5f;
      const bool la = q.m_la.at(0, y, x) >= 0.5f, lv = q.m_lv.at(0, y, x) >= 0.5f;
      const Rgb* c = rv ? &right_visible : lv ? &left_visible : (ra && !rv) ? &right_hidden : (la && !lv) ? &left_hidden
                                                                                                              : nullptr;
      for (int ch = 0; ch < 3; ++ch) {
        const float base = 0.4f * image.at(ch, y, x);
        v[(static_cast<std::size_t>(ch) * h + y) * w + x] = c ? 0.4f * base + 0.6f * (*c)[ch] : base;
      }
    }
  return ImageGrid(h, w, 3, std::move(v));
}

}  // namespace

ImageGrid render_panel(const ImageGrid& image, const InferResult& result, int min_tile) {
  if (image.channels() != 3) throw InvalidInput("panel: expected a 3-channel image");
  const int longest = std::max(image.height(), image.width());
  const int scale = std::max(1, (min_tile + longest - 1) / longest);
  const int th = image.height() * scale, tw = image.width() * scale;
  Canvas canvas(th, kPanelTiles * tw + (kPanelTiles - 1) * kPanelGap);
  const ImageGrid big = scaled(image, th, tw);
  auto tile_x = [&](int i) { return i * (tw + kPanelGap); };

  canvas.blit(big, tile_x(0));
  canvas.blit(scaled(mask_overlay(image, result.masks), th, tw), tile_x(1));
  for (HandSide side : {HandSide::kRight, HandSide::kLeft}) {
    const auto& hand = result.hand(side);
    const int x0 = tile_x(2 + static_cast<int>(side));
    canvas.blit(hand ? scaled(hand->pose_input, th, tw) : ImageGrid::filled(th, tw, 3, 0.5f), x0);
  }
  canvas.blit(big, tile_x(4));

  const auto& skel = shpe::SkeletonDef::hand();
  const int thickness = std::max(1, scale / 2);
  for (HandSide side : {HandSide::kRight, HandSide::kLeft}) {
    const auto& hand = result.hand(side);
    if (!hand) continue;
    const Rgb color = side == HandSide::kRight ? Rgb{1.0f, 0.25f, 0.1f} : Rgb{0.1f, 0.5f, 1.0f};
    const auto& j = hand->pose.joints;
    const double ox = tile_x(4);
    for (const auto& [a, b] : skel.bones) {
      if (!j.valid[a] || !j.valid[b]) continue;
      canvas.line(ox + j.joints_2d[a].x() * scale, j.joints_2d[a].y() * scale, ox + j.joints_2d[b].x() * scale,
                  j.joints_2d[b].y() * scale, color, thickness);
    }
    for (int k = 0; k < kNumJoints; ++k) {
      if (j.valid[k]) canvas.dot(ox + j.joints_2d[k].x() * scale, j.joints_2d[k].y() * scale, {1.0f, 1.0f, 1.0f}, thickness + 2);
    }
  }
  return std::move(canvas).finish();
}

}  // namespace hdr::pipeline
