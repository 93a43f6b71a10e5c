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

#include <cstddef>
#include <span>
#include <vector>

namespace hdr {

/// H x W x C raster with values in [0, 1], stored planar (channel-major).
///
/// Construction validates the value range and finiteness; after that the
/// grid is immutable. Functions that transform images return new grids.
class ImageGrid {
 public:
  ImageGrid() = default;
  ImageGrid(int height, int width, int channels, std::vector<float> values);

  static ImageGrid filled(int height, int width, int channels, float value);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  float at(int c, int y, int x) const {
    return values_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
  }
  std::span<const float> values() const { return values_; }
  std::span<const float> channel(int c) const;

  bool same_extent(const ImageGrid& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }
  bool same_shape(const ImageGrid& other) const {
    return same_extent(other) && channels_ == other.channels_;
  }

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<float> values_;
};

/// Output pixel (u, v) of a crop maps to source continuous coordinates
///   x = center_x - side_len / 2 + (u + 0.5) * side_len / out_size
/// (u replaced by out_size - 1 - u when flipped). Continuous coordinates put
/// pixel i on [i, i + 1), so the frame center of a W-wide image is W / 2.
struct CropTransform {
  double center_x = 0.0;
  double center_y = 0.0;
  double side_len = 1.0;
  int out_size = 1;
  bool flipped = false;

  /// Crop continuous coords -> source continuous coords.
  void to_source(double u, double v, double& x, double& y) const;
  /// Source continuous coords -> crop continuous coords.
  void from_source(double x, double y, double& u, double& v) const;

  friend bool operator==(const CropTransform&, const CropTransform&) = default;
};

enum class Interp { kBilinear, kNearest };

/// out = 1 where mask >= threshold, else 0. threshold must lie in (0, 1).
ImageGrid binarize(const ImageGrid& mask, double threshold = 0.5);

ImageGrid hflip(const ImageGrid& img);

/// Samples `img` through `t`. Reads outside the source read as 0.
ImageGrid resample(const ImageGrid& img, const CropTransform& t, Interp mode);

/// Axis-aligned resize to (height, width), bilinear, edge-clamped.
ImageGrid resize(const ImageGrid& img, int height, int width);

bool is_binary(const ImageGrid& mask);

}  // namespace hdr
