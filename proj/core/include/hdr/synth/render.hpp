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

#include <filesystem>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "hdr/core/image.hpp"
#include "hdr/core/rng.hpp"
#include "hdr/synth/hand.hpp"

namespace hdr::synth {

/// Pinhole camera at the origin looking down +z, image y pointing down.
/// Pixel (i, j) covers continuous coordinates [i, i + 1) x [j, j + 1).
struct Camera {
  double focal = 80.0;  ///< pixels
  double cx = 32.0, cy = 32.0;
  int width = 64, height = 64;

  static Camera centered(int size, double focal_scale);
  void validate() const;
  Eigen::Vector2d project(const Eigen::Vector3d& p) const;
  /// Unit ray through the center of pixel (x, y).
  Eigen::Vector3d ray(int x, int y) const;
};

/// Depth (distance along the ray), shaded color and coverage of one hand
/// rendered alone.
struct HandLayer {
  int width = 0, height = 0;
  std::vector<double> depth;  ///< +inf where the hand is absent
  std::vector<float> color;   ///< 3 planes

  bool covers(std::size_t p) const { return depth[p] < std::numeric_limits<double>::infinity(); }
  ImageGrid mask() const;
};

/// Ray parameter of the first hit with a capsule, or -1.
double intersect_capsule(const Eigen::Vector3d& dir, const Capsule& c);

HandLayer render_layer(const ProceduralHand& hand, const Camera& camera);

/// Procedural background: a two-color gradient or flat color with per-pixel
/// noise. When user images are supplied one of them is resized instead.
ImageGrid make_background(Rng& rng, int height, int width, const std::vector<ImageGrid>* user_images = nullptr);
/// Reads every PNG directly inside dir as RGB, sorted by file name.
std::vector<ImageGrid> load_backgrounds(const std::filesystem::path& dir);

}  // namespace hdr::synth
