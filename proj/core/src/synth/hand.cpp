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
#include "hdr/synth/hand.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hdr/core/error.hpp"

namespace hdr::synth {

using Eigen::Vector3d;

namespace {

void check(double v, AngleRange r, const char* what) {
  if (!(v >= r.lo - 1e-12 && v <= r.hi + 1e-12)) {
    throw InvalidInput(std::string("hand pose: ") + what + " out of range: " + std::to_string(v));
  }
}

double draw(Rng& rng, AngleRange r) { return rng.uniform(r.lo, r.hi); }

// Rest geometry of a right hand: x toward the thumb, y along the fingers,
// z out of the palm.
constexpr double kMcp[4][3] = {{20.0, 86.0, 0.0}, {0.0, 90.0, 0.0}, {-18.0, 85.0, 0.0}, {-34.0, 76.0, 0.0}};
constexpr double kSpread[4] = {0.12, 0.0, -0.12, -0.26};
constexpr double kPhalanx[4][3] = {{40.0, 25.0, 20.0}, {45.0, 28.0, 22.0}, {42.0, 27.0, 21.0}, {32.0, 20.0, 18.0}};
constexpr double kFingerRadius[4] = {8.0, 8.2, 7.6, 6.6};
constexpr double kThumbCmc[3] = {22.0, 22.0, 6.0};
constexpr double kThumbLength[3] = {40.0, 32.0, 28.0};
constexpr double kThumbRadius = 9.0;
constexpr double kPalmRadius = 11.0;

double hash_unit(std::uint64_t seed, std::int64_t x, std::int64_t y, std::int64_t z) {
  std::uint64_t h = seed ^ 0x9E3779B97F4A7C15ULL;
  for (std::int64_t v : {x, y, z}) {
    h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ULL;
    h = (h ^ (h >> 27)) * 0x94D049BB133111EBULL;
    h ^= h >> 31;
  }
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

Eigen::Matrix3d rotation(const Vector3d& rpy) {
  // Base frame maps the hand's +y (fingers) to image-up and its palm to the camera.
  Eigen::Matrix3d base;
  base << 1, 0, 0, 0, -1, 0, 0, 0, -1;
  const Eigen::Matrix3d r = (Eigen::AngleAxisd(rpy[0], Vector3d::UnitZ()) *
                             Eigen::AngleAxisd(rpy[1], Vector3d::UnitX()) *
                             Eigen::AngleAxisd(rpy[2], Vector3d::UnitY()))
                                .toRotationMatrix();
  return r * base;
}

}  // namespace

void HandPose::check_limits() const {
  for (int f = 0; f < 4; ++f) {
    check(finger_abduction[f], PoseLimits::kFingerAbduction, "finger abduction");
    check(finger_flexion[f][0], PoseLimits::kMcpFlexion, "MCP flexion");
    check(finger_flexion[f][1], PoseLimits::kPipFlexion, "PIP flexion");
    check(finger_flexion[f][2], PoseLimits::kDipFlexion, "DIP flexion");
  }
  check(thumb_abduction, PoseLimits::kThumbAbduction, "thumb abduction");
  check(thumb_flexion[0], PoseLimits::kThumbCmcFlexion, "thumb CMC flexion");
  check(thumb_flexion[1], PoseLimits::kThumbMcpFlexion, "thumb MCP flexion");
  check(thumb_flexion[2], PoseLimits::kThumbIpFlexion, "thumb IP flexion");
  check(global_rotation[0], PoseLimits::kRoll, "roll");
  check(global_rotation[1], PoseLimits::kPitch, "pitch");
  check(global_rotation[2], PoseLimits::kYaw, "yaw");
  if (!(root_position.z() > 0.0)) throw InvalidInput("hand pose: root must lie in front of the camera");
}

HandPose HandPose::sample(Rng& rng) {
  HandPose p;
  // One shared curl keeps the fingers coordinated, jittered per joint.
  const double curl = rng.uniform();
  auto curled = [&](AngleRange r) {
    const double t = std::clamp(curl + rng.uniform(-0.25, 0.25), 0.0, 1.0);
    return r.lo + t * (r.hi - r.lo);
  };
  for (int f = 0; f < 4; ++f) {
    p.finger_abduction[f] = draw(rng, PoseLimits::kFingerAbduction);
    p.finger_flexion[f] = {curled(PoseLimits::kMcpFlexion), curled(PoseLimits::kPipFlexion),
                           curled(PoseLimits::kDipFlexion)};
  }
  p.thumb_abduction = draw(rng, PoseLimits::kThumbAbduction);
  p.thumb_flexion = {curled(PoseLimits::kThumbCmcFlexion), curled(PoseLimits::kThumbMcpFlexion),
                     curled(PoseLimits::kThumbIpFlexion)};
  p.global_rotation = {draw(rng, PoseLimits::kRoll), draw(rng, PoseLimits::kPitch), draw(rng, PoseLimits::kYaw)};
  return p;
}

Vector3d SkinTexture::color_at(const Vector3d& p) const {
  const Vector3d q = p / noise_scale_mm;
  const Vector3d f(std::floor(q.x()), std::floor(q.y()), std::floor(q.z()));
  const Vector3d t = q - f;
  const Vector3d s = t.array() * t.array() * (3.0 - 2.0 * t.array());
  double n = 0.0;
  for (int c = 0; c < 8; ++c) {
    const int dx = c & 1, dy = (c >> 1) & 1, dz = (c >> 2) & 1;
    const double w = (dx ? s.x() : 1.0 - s.x()) * (dy ? s.y() : 1.0 - s.y()) * (dz ? s.z() : 1.0 - s.z());
    n += w * hash_unit(noise_seed, static_cast<std::int64_t>(f.x()) + dx, static_cast<std::int64_t>(f.y()) + dy,
                       static_cast<std::int64_t>(f.z()) + dz);
  }
  return (albedo.array() * (1.0 + noise_amplitude * (2.0 * n - 1.0))).min(1.0).max(0.0);
}

SkinTexture SkinTexture::sample(Rng& rng) {
  static constexpr double kTones[6][3] = {{0.95, 0.80, 0.70}, {0.90, 0.72, 0.58}, {0.78, 0.58, 0.44},
                                          {0.62, 0.44, 0.32}, {0.45, 0.31, 0.22}, {0.33, 0.22, 0.16}};
  const int k = rng.uniform_int(0, 5);
  SkinTexture t;
  for (int c = 0; c < 3; ++c) t.albedo[c] = std::clamp(kTones[k][c] + rng.uniform(-0.05, 0.05), 0.0, 1.0);
  t.noise_amplitude = rng.uniform(0.03, 0.08);
  t.noise_scale_mm = rng.uniform(8.0, 16.0);
  t.noise_seed = rng.next();
  return t;
}

SkinTexture SkinTexture::similar_to(const SkinTexture& base, Rng& rng) {
  SkinTexture t = base;
  for (int c = 0; c < 3; ++c) t.albedo[c] = std::clamp(base.albedo[c] + rng.uniform(-0.04, 0.04), 0.0, 1.0);
  t.noise_seed = rng.next();
  return t;
}

ProceduralHand::ProceduralHand(HandSide side, const HandPose& pose, SkinTexture texture, double size_scale)
    : side_(side), pose_(pose), texture_(std::move(texture)) {
  pose.check_limits();
  if (!(size_scale > 0.0)) throw InvalidInput("hand: size scale must be positive");
  const Vector3d palm_normal = Vector3d::UnitZ();
  std::array<Vector3d, kNumJoints> local;
  local[0] = Vector3d::Zero();

  const Vector3d cmc(kThumbCmc[0], kThumbCmc[1], kThumbCmc[2]);
  const Vector3d thumb_dir = Eigen::AngleAxisd(pose.thumb_abduction, palm_normal) * Vector3d(0.75, 0.66, 0.0).normalized();
  Vector3d thumb_bend = (Vector3d(-0.6, 0.0, 1.0) - Vector3d(-0.6, 0.0, 1.0).dot(thumb_dir) * thumb_dir).normalized();
  local[1] = cmc;
  double phi = 0.0;
  for (int k = 0; k < 3; ++k) {
    phi += pose.thumb_flexion[k];
    local[2 + k] = local[1 + k] + kThumbLength[k] * (std::cos(phi) * thumb_dir + std::sin(phi) * thumb_bend);
  }
  for (int f = 0; f < 4; ++f) {
    const int base = 5 + 4 * f;
    local[base] = Vector3d(kMcp[f][0], kMcp[f][1], kMcp[f][2]);
    const double a = kSpread[f] + pose.finger_abduction[f];
    const Vector3d u(-std::sin(a), std::cos(a), 0.0);
    phi = 0.0;
    for (int k = 0; k < 3; ++k) {
      phi += pose.finger_flexion[f][k];
      local[base + 1 + k] = local[base + k] + kPhalanx[f][k] * (std::cos(phi) * u + std::sin(phi) * palm_normal);
    }
  }

  const double mirror = side == HandSide::kLeft ? -1.0 : 1.0;
  const Eigen::Matrix3d r = rotation(pose.global_rotation);
  for (int j = 0; j < kNumJoints; ++j) {
    Vector3d p = local[j] * size_scale;
    p.x() *= mirror;
    joints_[j] = r * p + pose.root_position;
  }

  auto add = [&](int i, int j, double radius) { capsules_.push_back({joints_[i], joints_[j], radius * size_scale}); };
  add(0, 1, kPalmRadius + 1.0);
  for (int k = 0; k < 3; ++k) add(1 + k, 2 + k, kThumbRadius * (1.0 - 0.1 * k));
  for (int f = 0; f < 4; ++f) {
    const int base = 5 + 4 * f;
    add(0, base, kPalmRadius);
    for (int k = 0; k < 3; ++k) add(base + k, base + k + 1, kFingerRadius[f] * (1.0 - 0.1 * k));
  }
  add(5, 9, kPalmRadius - 1.0);
  add(9, 13, kPalmRadius - 1.0);
  add(13, 17, kPalmRadius - 1.0);
  add(1, 5, kThumbRadius - 1.0);
}

void ProceduralHand::translate(const Vector3d& t) {
  for (auto& j : joints_) j += t;
  for (auto& c : capsules_) {
    c.a += t;
    c.b += t;
  }
  pose_.root_position += t;
}

double segment_distance(const Vector3d& p1, const Vector3d& q1, const Vector3d& p2, const Vector3d& q2) {
  const Vector3d d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
  const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  constexpr double kEps = 1e-12;
  double s = 0.0, t = 0.0;
  if (a <= kEps && e <= kEps) return r.norm();
  if (a <= kEps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= kEps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2), denom = a * e - b * b;
      s = denom > kEps ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p1 + d1 * s) - (p2 + d2 * t)).norm();
}

double min_clearance(const ProceduralHand& a, const ProceduralHand& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ca : a.capsules()) {
    for (const auto& cb : b.capsules()) {
      best = std::min(best, segment_distance(ca.a, ca.b, cb.a, cb.b) - ca.radius - cb.radius);
    }
  }
  return best;
}

}  // namespace hdr::synth
