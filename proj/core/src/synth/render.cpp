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
#include "hdr/synth/render.hpp"

#include <algorithm>
#include <cmath>

#include "hdr/core/error.hpp"
#include "hdr/core/io.hpp"

namespace hdr::synth {

using Eigen::Vector3d;

namespace {

const Vector3d& light_direction() {
  static const Vector3d l = Vector3d(-0.3, -0.5, -1.0).normalized();  // toward the light
  return l;
}

constexpr double kAmbient = 0.35;

}  // namespace

Camera Camera::centered(int size, double focal_scale) {
  Camera c{focal_scale * size, size / 2.0, size / 2.0, size, size};
  c.validate();
  return c;
}

void Camera::validate() const {
  if (!(focal > 0.0) || !std::isfinite(focal)) throw InvalidInput("camera: focal length must be positive");
  if (width <= 0 || height <= 0) throw InvalidInput("camera: image size must be positive");
}

Eigen::Vector2d Camera::project(const Vector3d& p) const {
  if (!(p.z() > 0.0)) throw InvalidInput("camera: point behind the camera");
  return {focal * p.x() / p.z() + cx, focal * p.y() / p.z() + cy};
}

Vector3d Camera::ray(int x, int y) const { return Vector3d((x + 0.5 - cx) / focal, (y + 0.5 - cy) / focal, 1.0).normalized(); }

ImageGrid HandLayer::mask() const {
  std::vector<float> v(depth.size());
  for (std::size_t p = 0; p < v.size(); ++p) v[p] = covers(p) ? 1.0f : 0.0f;
  return ImageGrid(height, width, 1, std::move(v));
}

double intersect_capsule(const Vector3d& rd, const Capsule& cap) {
  // Ray from the origin (outside the capsule): the first hit of the union of
  // the cylinder body and the two end spheres.
  const double r2 = cap.radius * cap.radius;
  double best = -1.0;
  auto keep = [&](double t) {
    if (t > 0.0 && (best < 0.0 || t < best)) best = t;
  };
  const Vector3d ba = cap.b - cap.a, oa = -cap.a;
  const double baba = ba.dot(ba), bard = ba.dot(rd), baoa = ba.dot(oa);
  const double a = baba - bard * bard;
  if (a > 1e-12 * baba) {
    const double b = baba * rd.dot(oa) - baoa * bard;
    const double c = baba * oa.dot(oa) - baoa * baoa - r2 * baba;
    const double h = b * b - a * c;
    if (h >= 0.0) {
      const double t = (-b - std::sqrt(h)) / a;
      const double y = baoa + t * bard;
      if (y >= 0.0 && y <= baba) keep(t);
    }
  }
  for (const Vector3d* end : {&cap.a, &cap.b}) {
    const double b = -rd.dot(*end), c = end->squaredNorm() - r2, h = b * b - c;
    if (h >= 0.0) keep(-b - std::sqrt(h));
  }
  return best;
}

HandLayer render_layer(const ProceduralHand& hand, const Camera& camera) {
  camera.validate();
  const std::size_t plane = static_cast<std::size_t>(camera.width) * camera.height;
  HandLayer layer{camera.width, camera.height, std::vector<double>(plane, std::numeric_limits<double>::infinity()),
                  std::vector<float>(3 * plane, 0.0f)};
  const auto& caps = hand.capsules();
  for (int y = 0; y < camera.height; ++y) {
    for (int x = 0; x < camera.width; ++x) {
      const Vector3d rd = camera.ray(x, y);
      double best = std::numeric_limits<double>::infinity();
      int hit = -1;
      for (std::size_t k = 0; k < caps.size(); ++k) {
        const double t = intersect_capsule(rd, caps[k]);
        if (t > 0.0 && t < best) {
          best = t;
          hit = static_cast<int>(k);
        }
      }
      if (hit < 0) continue;
      const std::size_t p = static_cast<std::size_t>(y) * camera.width + x;
      const Vector3d point = best * rd;
      const Capsule& cap = caps[hit];
      const Vector3d ba = cap.b - cap.a;
      const double s = ba.squaredNorm() > 0.0 ? std::clamp((point - cap.a).dot(ba) / ba.squaredNorm(), 0.0, 1.0) : 0.0;
      const Vector3d normal = (point - (cap.a + s * ba)).normalized();
      const double shade = kAmbient + (1.0 - kAmbient) * std::max(0.0, normal.dot(light_direction()));
      const Vector3d albedo = hand.texture().color_at(point - hand.pose().root_position);
      layer.depth[p] = best;
      for (int c = 0; c < 3; ++c) {
        layer.color[c * plane + p] = static_cast<float>(std::clamp(albedo[c] * shade, 0.0, 1.0));
      }
    }
  }
  return layer;
}

ImageGrid make_background(Rng& rng, int height, int width, const std::vector<ImageGrid>* user_images) {
  if (user_images && !user_images->empty()) {
    const auto& src = (*user_images)[rng.uniform_int(0, static_cast<int>(user_images->size()) - 1)];
    return resize(src, height, width);
  }
  const std::size_t plane = static_cast<std::size_t>(height) * width;
  std::vector<float> v(3 * plane);
  double c0[3], c1[3];
  for (int c = 0; c < 3; ++c) {
    c0[c] = rng.uniform(0.05, 0.95);
    c1[c] = rng.uniform(0.05, 0.95);
  }
  if (rng.bernoulli(0.5)) {
    const double angle = rng.uniform(0.0, 2.0 * M_PI);
    const double ax = std::cos(angle), ay = std::sin(angle);
    const double span = std::abs(ax) * width + std::abs(ay) * height;
    const double offset = std::min(0.0, ax * width) + std::min(0.0, ay * height);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const double t = ((x + 0.5) * ax + (y + 0.5) * ay - offset) / span;
        for (int c = 0; c < 3; ++c) {
          v[c * plane + y * width + x] = static_cast<float>(std::clamp(c0[c] + (c1[c] - c0[c]) * t, 0.0, 1.0));
        }
      }
  } else {
    const double amp = rng.uniform(0.02, 0.1);
    for (std::size_t p = 0; p < plane; ++p) {
      const double n = rng.uniform(-amp, amp);
      for (int c = 0; c < 3; ++c) v[c * plane + p] = static_cast<float>(std::clamp(c0[c] + n, 0.0, 1.0));
    }
  }
  return ImageGrid(height, width, 3, std::move(v));
}

std::vector<ImageGrid> load_backgrounds(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("background directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ImageGrid> out;
  for (const auto& f : files) out.push_back(io::read_png(f, 3));
  return out;
}

}  // namespace hdr::synth
