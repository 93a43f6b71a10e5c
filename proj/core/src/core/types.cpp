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
#include "hdr/core/types.hpp"

#include <string>

#include "hdr/core/error.hpp"

namespace hdr {

std::string_view to_string(HandSide s) { return s == HandSide::kRight ? "right" : "left"; }

HandSide hand_side_from_string(std::string_view s) {
  if (s == "right") return HandSide::kRight;
  if (s == "left") return HandSide::kLeft;
  throw InvalidInput("unknown hand side '" + std::string(s) + "'");
}

void MaskQuad::check_shape() const {
  for (const ImageGrid* m : {&m_ra, &m_rv, &m_la, &m_lv}) {
    if (m->channels() != 1) throw ShapeMismatch("MaskQuad: masks must be single channel");
    if (!m->same_extent(m_ra)) throw ShapeMismatch("MaskQuad: masks differ in extent");
  }
}

MaskQuad MaskQuad::swapped() const { return MaskQuad{m_la, m_lv, m_ra, m_rv}; }

MaskQuad MaskQuad::binarized(double threshold) const {
  return MaskQuad{binarize(m_ra, threshold), binarize(m_rv, threshold),
                  binarize(m_la, threshold), binarize(m_lv, threshold)};
}

MaskQuad MaskQuad::flipped() const {
  return MaskQuad{hflip(m_ra), hflip(m_rv), hflip(m_la), hflip(m_lv)};
}

bool satisfies_invariants(const MaskQuad& q, std::string* reason) {
  auto fail = [&](const char* why) {
    if (reason) *reason = why;
    return false;
  };
  try {
    q.check_shape();
  } catch (const ShapeMismatch& e) {
    return fail("shape");
  }
  const auto ra = q.m_ra.values(), rv = q.m_rv.values();
  const auto la = q.m_la.values(), lv = q.m_lv.values();
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const bool bra = ra[i] >= 0.5f, brv = rv[i] >= 0.5f;
    const bool bla = la[i] >= 0.5f, blv = lv[i] >= 0.5f;
    if (brv && !bra) return fail("m_rv not contained in m_ra");
    if (blv && !bla) return fail("m_lv not contained in m_la");
    if (brv && blv) return fail("m_rv and m_lv overlap");
  }
  return true;
}

JointSet::JointSet() {
  joints_2d.fill(Eigen::Vector2d::Zero());
  joints_3d.fill(Eigen::Vector3d::Zero());
}

int JointSet::valid_count() const {
  int n = 0;
  for (bool v : valid) n += v ? 1 : 0;
  return n;
}

JointSet JointSet::root_relative() const {
  JointSet out = *this;
  const Eigen::Vector3d root = joints_3d[root_index];
  for (auto& p : out.joints_3d) p -= root;
  return out;
}

}  // namespace hdr
