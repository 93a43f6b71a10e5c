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
#include "hdr/shpe/maps.hpp"

#include <cmath>
#include <string>

#include "hdr/core/error.hpp"
#include "hdr/shpe/skeleton.hpp"

namespace hdr::shpe {

PoseMaps::PoseMaps(int s)
    : size(s),
      heat(static_cast<std::size_t>(kNumJoints) * s * s),
      loc(static_cast<std::size_t>(kLocChannels) * s * s),
      delta(static_cast<std::size_t>(kDeltaChannels) * s * s) {}

std::vector<double> PoseMaps::stacked() const {
  std::vector<double> out;
  out.reserve(heat.size() + loc.size() + delta.size());
  out.insert(out.end(), heat.begin(), heat.end());
  out.insert(out.end(), loc.begin(), loc.end());
  out.insert(out.end(), delta.begin(), delta.end());
  return out;
}

PoseMaps PoseMaps::from_stacked(int size, const double* values) {
  PoseMaps m(size);
  std::copy(values, values + m.heat.size(), m.heat.begin());
  values += m.heat.size();
  std::copy(values, values + m.loc.size(), m.loc.begin());
  values += m.loc.size();
  std::copy(values, values + m.delta.size(), m.delta.begin());
  return m;
}

void MapGeometry::validate() const {
  if (map_size <= 0 || input_size <= 0 || input_size % map_size != 0) {
    throw InvalidInput("pose maps: input size must be a positive multiple of the map size");
  }
  if (!(sigma > 0.0) || !(depth_scale_mm > 0.0)) throw InvalidInput("pose maps: sigma and depth scale must be positive");
}

JointSet to_crop_frame(const JointSet& source, const CropTransform& crop) {
  JointSet out = source.root_relative();
  for (int j = 0; j < kNumJoints; ++j) {
    double u = 0.0, v = 0.0;
    crop.from_source(source.joints_2d[j].x(), source.joints_2d[j].y(), u, v);
    out.joints_2d[j] = {u, v};
    if (crop.flipped) out.joints_3d[j].x() = -out.joints_3d[j].x();
  }
  return out;
}

PoseTarget render_target_maps(const JointSet& crop_joints, const MapGeometry& geo) {
  geo.validate();
  const int s = geo.map_size;
  const std::size_t plane = static_cast<std::size_t>(s) * s;
  const double stride = geo.stride();
  PoseTarget t{PoseMaps(s), {}, {}, {}, {}};
  t.heat_weight.assign(t.maps.heat.size(), 0.0);
  t.loc_weight.assign(t.maps.loc.size(), 0.0);
  t.delta_weight.assign(t.maps.delta.size(), 0.0);

  const JointSet rel = crop_joints.root_relative();
  std::array<int, kNumJoints> px{}, py{};
  for (int j = 0; j < kNumJoints; ++j) {
    const double u = crop_joints.joints_2d[j].x(), v = crop_joints.joints_2d[j].y();
    t.valid[j] = crop_joints.valid[j] && std::isfinite(u) && std::isfinite(v) && u >= 0.0 && v >= 0.0 &&
                 u < geo.input_size && v < geo.input_size;
    if (!t.valid[j]) continue;
    px[j] = std::min(s - 1, static_cast<int>(std::floor(u / stride)));
    py[j] = std::min(s - 1, static_cast<int>(std::floor(v / stride)));
  }

  auto in_disk = [&](int j, int x, int y) {
    const double dx = x - px[j], dy = y - py[j];
    return dx * dx + dy * dy <= geo.sigma * geo.sigma;
  };
  const double inv_two_var = 1.0 / (2.0 * geo.sigma * geo.sigma);
  for (int j = 0; j < kNumJoints; ++j) {
    if (!t.valid[j]) continue;
    const Eigen::Vector3d loc = rel.joints_3d[j] / geo.depth_scale_mm;
    for (int y = 0; y < s; ++y) {
      for (int x = 0; x < s; ++x) {
        const std::size_t p = static_cast<std::size_t>(y) * s + x;
        const double dx = x - px[j], dy = y - py[j];
        t.maps.heat[j * plane + p] = std::exp(-(dx * dx + dy * dy) * inv_two_var);
        t.heat_weight[j * plane + p] = 1.0;
        if (!in_disk(j, x, y)) continue;
        for (int c = 0; c < 3; ++c) {
          t.maps.loc[(3 * j + c) * plane + p] = loc[c];
          t.loc_weight[(3 * j + c) * plane + p] = 1.0;
        }
      }
    }
  }

  const auto& bones = SkeletonDef::hand().bones;
  for (int b = 0; b < kNumBones; ++b) {
    const auto [parent, child] = bones[b];
    if (!t.valid[parent] || !t.valid[child]) continue;
    Eigen::Vector3d dir = rel.joints_3d[child] - rel.joints_3d[parent];
    const double n = dir.norm();
    dir = n > 0.0 ? Eigen::Vector3d(dir / n) : Eigen::Vector3d::Zero();
    for (int y = 0; y < s; ++y) {
      for (int x = 0; x < s; ++x) {
        if (!in_disk(child, x, y)) continue;
        const std::size_t p = static_cast<std::size_t>(y) * s + x;
        for (int c = 0; c < 3; ++c) {
          t.maps.delta[(3 * b + c) * plane + p] = dir[c];
          t.delta_weight[(3 * b + c) * plane + p] = 1.0;
        }
      }
    }
  }
  return t;
}

DecodedPose decode_pose(const PoseMaps& maps, const CropTransform& crop, double depth_scale_mm) {
  const int s = maps.size;
  if (s <= 0 || maps.heat.size() != static_cast<std::size_t>(kNumJoints) * s * s ||
      maps.loc.size() != static_cast<std::size_t>(kLocChannels) * s * s) {
    throw ShapeMismatch("decode_pose: inconsistent map sizes");
  }
  const std::size_t plane = maps.plane();
  const double stride = static_cast<double>(crop.out_size) / s;
  DecodedPose out;
  out.joints.root_index = SkeletonDef::hand().root_index;
  std::array<Eigen::Vector3d, kNumJoints> loc{};
  for (int j = 0; j < kNumJoints; ++j) {
    const double* h = maps.heat.data() + j * plane;
    std::size_t best = 0;
    int ties = 1;
    for (std::size_t p = 1; p < plane; ++p) {
      if (h[p] > h[best]) {
        best = p;
        ties = 1;
      } else if (h[p] == h[best]) {
        ++ties;
      }
    }
    out.peak_index[j] = static_cast<int>(best);
    out.confidence[j] = h[best];
    out.joints.valid[j] = h[best] > 0.0;
    out.low_confidence[j] = ties > 1 || h[best] < kLowConfidence;
    const int x = static_cast<int>(best % s), y = static_cast<int>(best / s);
    double sx = 0.0, sy = 0.0;
    crop.to_source((x + 0.5) * stride, (y + 0.5) * stride, sx, sy);
    out.joints.joints_2d[j] = {sx, sy};
    for (int c = 0; c < 3; ++c) loc[j][c] = maps.loc[(3 * j + c) * plane + best] * depth_scale_mm;
    if (crop.flipped) loc[j].x() = -loc[j].x();
  }
  const int root = out.joints.root_index;
  const Eigen::Vector3d origin = out.joints.valid[root] ? loc[root] : Eigen::Vector3d::Zero();
  for (int j = 0; j < kNumJoints; ++j) {
    out.joints.joints_3d[j] = out.joints.valid[j] ? Eigen::Vector3d(loc[j] - origin) : Eigen::Vector3d::Zero();
  }
  return out;
}

PoseMaps flip_maps(const PoseMaps& maps) {
  const int s = maps.size;
  const std::size_t plane = maps.plane();
  PoseMaps out(s);
  auto mirror = [&](const std::vector<double>& src, std::vector<double>& dst, int channels, int xyz) {
    for (int c = 0; c < channels; ++c) {
      const double sign = xyz && c % 3 == 0 ? -1.0 : 1.0;
      for (int y = 0; y < s; ++y) {
        for (int x = 0; x < s; ++x) {
          dst[c * plane + y * s + x] = sign * src[c * plane + y * s + (s - 1 - x)];
        }
      }
    }
  };
  mirror(maps.heat, out.heat, kNumJoints, 0);
  mirror(maps.loc, out.loc, kLocChannels, 1);
  mirror(maps.delta, out.delta, kDeltaChannels, 1);
  return out;
}

}  // namespace hdr::shpe
