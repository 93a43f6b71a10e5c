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
#include "hdr/core/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hdr/core/error.hpp"

namespace hdr {

ImageGrid::ImageGrid(int height, int width, int channels, std::vector<float> values)
    : height_(height), width_(width), channels_(channels), values_(std::move(values)) {
  if (height <= 0 || width <= 0 || channels <= 0) {
    throw InvalidInput("ImageGrid: non-positive extent");
  }
  if (values_.size() != static_cast<std::size_t>(height) * width * channels) {
    throw ShapeMismatch("ImageGrid: value count " + std::to_string(values_.size()) +
                        " does not match " + std::to_string(height) + "x" +
                        std::to_string(width) + "x" + std::to_string(channels));
  }
  for (float v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("ImageGrid: non-finite value");
    if (v < 0.0f || v > 1.0f) throw InvalidInput("ImageGrid: value outside [0,1]");
  }
}

ImageGrid ImageGrid::filled(int height, int width, int channels, float value) {
  return ImageGrid(height, width, channels,
                   std::vector<float>(static_cast<std::size_t>(height) * width * channels, value));
}

std::span<const float> ImageGrid::channel(int c) const {
  const std::size_t plane = static_cast<std::size_t>(height_) * width_;
  return std::span<const float>(values_).subspan(c * plane, plane);
}

void CropTransform::to_source(double u, double v, double& x, double& y) const {
  if (flipped) u = out_size - u;
  const double scale = side_len / out_size;
  x = center_x - 0.5 * side_len + u * scale;
  y = center_y - 0.5 * side_len + v * scale;
}

void CropTransform::from_source(double x, double y, double& u, double& v) const {
  const double scale = out_size / side_len;
  u = (x - center_x + 0.5 * side_len) * scale;
  v = (y - center_y + 0.5 * side_len) * scale;
  if (flipped) u = out_size - u;
}

ImageGrid binarize(const ImageGrid& mask, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw InvalidInput("binarize: threshold must lie in (0,1)");
  }
  std::vector<float> out(mask.size());
  const auto in = mask.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = in[i] >= threshold ? 1.0f : 0.0f;
  return ImageGrid(mask.height(), mask.width(), mask.channels(), std::move(out));
}

ImageGrid hflip(const ImageGrid& img) {
  const int h = img.height(), w = img.width(), c = img.channels();
  std::vector<float> out(img.size());
  for (int ch = 0; ch < c; ++ch) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        out[(static_cast<std::size_t>(ch) * h + y) * w + x] = img.at(ch, y, w - 1 - x);
      }
    }
  }
  return ImageGrid(h, w, c, std::move(out));
}

namespace {

float sample_zero_padded(const ImageGrid& img, int c, int y, int x) {
  if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) return 0.0f;
  return img.at(c, y, x);
}

}  // namespace

ImageGrid resample(const ImageGrid& img, const CropTransform& t, Interp mode) {
  if (t.out_size <= 0) throw InvalidInput("resample: out_size must be positive");
  if (!(t.side_len > 0.0)) throw InvalidInput("resample: side_len must be positive");
  const int n = t.out_size, c = img.channels();
  std::vector<float> out(static_cast<std::size_t>(n) * n * c);
  for (int v = 0; v < n; ++v) {
    for (int u = 0; u < n; ++u) {
      double sx = 0.0, sy = 0.0;
      t.to_source(u + 0.5, v + 0.5, sx, sy);
      for (int ch = 0; ch < c; ++ch) {
        float value = 0.0f;
        if (mode == Interp::kNearest) {
          value = sample_zero_padded(img, ch, static_cast<int>(std::floor(sy)),
                                     static_cast<int>(std::floor(sx)));
        } else {
          const double fx = sx - 0.5, fy = sy - 0.5;
          const int x0 = static_cast<int>(std::floor(fx));
          const int y0 = static_cast<int>(std::floor(fy));
          const double ax = fx - x0, ay = fy - y0;
          const double acc = (1 - ay) * ((1 - ax) * sample_zero_padded(img, ch, y0, x0) +
                                         ax * sample_zero_padded(img, ch, y0, x0 + 1)) +
                             ay * ((1 - ax) * sample_zero_padded(img, ch, y0 + 1, x0) +
                                   ax * sample_zero_padded(img, ch, y0 + 1, x0 + 1));
          value = static_cast<float>(std::clamp(acc, 0.0, 1.0));
        }
        out[(static_cast<std::size_t>(ch) * n + v) * n + u] = value;
      }
    }
  }
  return ImageGrid(n, n, c, std::move(out));
}

ImageGrid resize(const ImageGrid& img, int height, int width) {
  if (height <= 0 || width <= 0) throw InvalidInput("resize: non-positive extent");
  if (height == img.height() && width == img.width()) return img;
  const int c = img.channels();
  std::vector<float> out(static_cast<std::size_t>(height) * width * c);
  const double sy = static_cast<double>(img.height()) / height;
  const double sx = static_cast<double>(img.width()) / width;
  for (int ch = 0; ch < c; ++ch) {
    for (int y = 0; y < height; ++y) {
      const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height() - 1.0);
      const int y0 = static_cast<int>(fy);
      const int y1 = std::min(y0 + 1, img.height() - 1);
      const double ay = fy - y0;
      for (int x = 0; x < width; ++x) {
        const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width() - 1.0);
        const int x0 = static_cast<int>(fx);
        const int x1 = std::min(x0 + 1, img.width() - 1);
        const double ax = fx - x0;
        const double acc = (1 - ay) * ((1 - ax) * img.at(ch, y0, x0) + ax * img.at(ch, y0, x1)) +
                           ay * ((1 - ax) * img.at(ch, y1, x0) + ax * img.at(ch, y1, x1));
        out[(static_cast<std::size_t>(ch) * height + y) * width + x] =
            static_cast<float>(std::clamp(acc, 0.0, 1.0));
      }
    }
  }
  return ImageGrid(height, width, c, std::move(out));
}

bool is_binary(const ImageGrid& mask) {
  return std::ranges::all_of(mask.values(), [](float v) { return v == 0.0f || v == 1.0f; });
}

}  // namespace hdr
