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
#include <string_view>

#include <Eigen/Core>

#include "hdr/core/image.hpp"

namespace hdr {

enum class HandSide { kRight, kLeft };

constexpr HandSide other(HandSide s) {
  return s == HandSide::kRight ? HandSide::kLeft : HandSide::kRight;
}
std::string_view to_string(HandSide s);
HandSide hand_side_from_string(std::string_view s);

/// Amodal (a) and visible (v) masks of the right (r) and left (l) hand.
struct MaskQuad {
  ImageGrid m_ra;
  ImageGrid m_rv;
  ImageGrid m_la;
  ImageGrid m_lv;

  const ImageGrid& amodal(HandSide s) const { return s == HandSide::kRight ? m_ra : m_la; }
  const ImageGrid& visible(HandSide s) const { return s == HandSide::kRight ? m_rv : m_lv; }

  /// All four masks single channel with one common extent.
  void check_shape() const;
  /// Left and right roles exchanged.
  MaskQuad swapped() const;
  MaskQuad binarized(double threshold = 0.5) const;
  MaskQuad flipped() const;

  friend bool operator==(const MaskQuad&, const MaskQuad&) = default;
};

/// Containment (visible within amodal) and visible-disjointness after
/// binarization at 0.5. Returns false and fills `reason` on violation.
bool satisfies_invariants(const MaskQuad& q, std::string* reason = nullptr);

inline constexpr int kNumJoints = 21;
inline constexpr int kNumBones = 20;

/// 21 keypoints of one hand. joints_2d in pixels, joints_3d in mm.
struct JointSet {
  std::array<Eigen::Vector2d, kNumJoints> joints_2d;
  std::array<Eigen::Vector3d, kNumJoints> joints_3d;
  std::array<bool, kNumJoints> valid{};
  int root_index = 0;

  JointSet();

  int valid_count() const;
  /// 3D joints translated so the root sits at the origin.
  JointSet root_relative() const;
};

}  // namespace hdr
