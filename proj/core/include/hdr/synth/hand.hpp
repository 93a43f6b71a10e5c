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

#include <Eigen/Dense>

#include "hdr/core/rng.hpp"
#include "hdr/core/types.hpp"

namespace hdr::synth {

/// Articulation angles in radians. Fingers are index, middle, ring, pinky.
struct HandPose {
  std::array<double, 4> finger_abduction{};
  std::array<std::array<double, 3>, 4> finger_flexion{};  ///< MCP, PIP, DIP
  double thumb_abduction = 0.0;
  std::array<double, 3> thumb_flexion{};  ///< CMC, MCP, IP
  Eigen::Vector3d global_rotation = Eigen::Vector3d::Zero();  ///< roll, pitch, yaw
  Eigen::Vector3d root_position{0.0, 0.0, 400.0};              ///< wrist, camera frame, mm

  /// Throws InvalidInput when an angle leaves the anatomical range.
  void check_limits() const;
  static HandPose sample(Rng& rng);
};

struct AngleRange {
  double lo, hi;
};

/// Anatomical ranges (radians) used by HandPose::check_limits and sampling.
struct PoseLimits {
  static constexpr AngleRange kFingerAbduction{-0.26, 0.26};
  static constexpr AngleRange kMcpFlexion{-0.17, 1.4};
  static constexpr AngleRange kPipFlexion{0.0, 1.75};
  static constexpr AngleRange kDipFlexion{0.0, 1.4};
  static constexpr AngleRange kThumbAbduction{-0.35, 0.52};
  static constexpr AngleRange kThumbCmcFlexion{0.0, 0.87};
  static constexpr AngleRange kThumbMcpFlexion{0.0, 1.05};
  static constexpr AngleRange kThumbIpFlexion{0.0, 1.4};
  static constexpr AngleRange kRoll{-1.05, 1.05};
  static constexpr AngleRange kPitch{-0.6, 0.6};
  static constexpr AngleRange kYaw{-0.7, 0.7};
};

struct Capsule {
  Eigen::Vector3d a, b;
  double radius = 1.0;
};

/// Skin palette: base albedo plus lattice value noise over the surface.
struct SkinTexture {
  Eigen::Vector3d albedo{0.8, 0.6, 0.5};
  double noise_amplitude = 0.05;
  double noise_scale_mm = 12.0;
  std::uint64_t noise_seed = 0;

  Eigen::Vector3d color_at(const Eigen::Vector3d& p) const;
  static SkinTexture sample(Rng& rng);
  /// Same tone family with a small perturbation.
  static SkinTexture similar_to(const SkinTexture& base, Rng& rng);
};

/// Capsule-skinned articulated hand in camera coordinates (mm).
class ProceduralHand {
 public:
  ProceduralHand(HandSide side, const HandPose& pose, SkinTexture texture, double size_scale = 1.0);

  HandSide side() const { return side_; }
  const std::array<Eigen::Vector3d, kNumJoints>& joints() const { return joints_; }
  const std::vector<Capsule>& capsules() const { return capsules_; }
  const SkinTexture& texture() const { return texture_; }
  const HandPose& pose() const { return pose_; }

  /// Moves the whole hand by t (camera frame, mm).
  void translate(const Eigen::Vector3d& t);

 private:
  HandSide side_;
  HandPose pose_;
  SkinTexture texture_;
  std::array<Eigen::Vector3d, kNumJoints> joints_;
  std::vector<Capsule> capsules_;
};

/// Closest distance between segments [p1, q1] and [p2, q2].
double segment_distance(const Eigen::Vector3d& p1, const Eigen::Vector3d& q1, const Eigen::Vector3d& p2,
                        const Eigen::Vector3d& q2);
/// Smallest surface gap between any two capsules of different hands;
/// negative when they interpenetrate.
double min_clearance(const ProceduralHand& a, const ProceduralHand& b);

}  // namespace hdr::synth
