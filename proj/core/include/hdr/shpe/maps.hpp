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

#include <array>
#include <vector>

#include "hdr/core/image.hpp"
#include "hdr/core/types.hpp"

namespace hdr::shpe {

inline constexpr int kLocChannels = 3 * kNumJoints;
inline constexpr int kDeltaChannels = 3 * kNumBones;
/// Stacked channel layout: heat (21), loc (63, joint-major xyz), delta (60).
inline constexpr int kMapChannels = kNumJoints + kLocChannels + kDeltaChannels;

/// Dense per-joint maps of one crop, each plane size x size.
struct PoseMaps {
  int size = 0;
  std::vector<double> heat;   ///< [21][size][size], values in [0, 1]
  std::vector<double> loc;    ///< [21 * 3][size][size], root-relative, normalized units
  std::vector<double> delta;  ///< [20 * 3][size][size], unit bone directions

  explicit PoseMaps(int size = 0);
  std::size_t plane() const { return static_cast<std::size_t>(size) * size; }
  /// Stacked [144][size][size] values in channel order heat, loc, delta.
  std::vector<double> stacked() const;
  static PoseMaps from_stacked(int size, const double* values);
};

/// Training target: maps plus per-entry supervision weights in {0, 1}.
struct PoseTarget {
  PoseMaps maps;
  std::vector<double> heat_weight, loc_weight, delta_weight;
  std::array<bool, kNumJoints> valid{};
};

struct MapGeometry {
  int map_size = 32;
  int input_size = 256;
  double sigma = 2.0;            ///< map pixels
  double depth_scale_mm = 100.0;  ///< one normalized loc unit in mm

  double stride() const { return static_cast<double>(input_size) / map_size; }
  void validate() const;
};

/// Joints expressed in a crop: 2D through the inverse crop transform, 3D
/// root-relative with x mirrored when the crop is flipped.
JointSet to_crop_frame(const JointSet& source, const CropTransform& crop);

/// Maps for joints given in crop coordinates. Each joint's Gaussian peaks
/// (value 1) at the map pixel containing it; loc and delta values are written
/// inside the disk of radius sigma around that pixel. Joints outside the crop
/// are marked invalid.
PoseTarget render_target_maps(const JointSet& crop_joints, const MapGeometry& geo);

struct DecodedPose {
  JointSet joints;  ///< source-frame 2D pixels and root-relative mm
  std::array<double, kNumJoints> confidence{};
  std::array<bool, kNumJoints> low_confidence{};
  std::array<int, kNumJoints> peak_index{};  ///< linear map index of each argmax
};

inline constexpr double kLowConfidence = 0.3;

/// Argmax decoding (lowest linear index on ties). A joint whose heatmap is
/// all zero is invalid; a tied or weak peak is flagged low-confidence.
DecodedPose decode_pose(const PoseMaps& maps, const CropTransform& crop, double depth_scale_mm);

/// Horizontal mirror of the maps with the x components of loc and delta negated.
PoseMaps flip_maps(const PoseMaps& maps);

}  // namespace hdr::shpe
