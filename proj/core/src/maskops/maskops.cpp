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
#include "hdr/maskops/maskops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hdr/core/error.hpp"

namespace hdr::maskops {
namespace {

void require_mask_pair(const ImageGrid& a, const ImageGrid& b, const char* op) {
  if (a.channels() != 1 || b.channels() != 1 || !a.same_extent(b)) {
    throw ShapeMismatch(std::string(op) + ": masks must be single-channel with equal extent");
  }
}

template <class F>
ImageGrid combine(const ImageGrid& a, const ImageGrid& b, F f) {
  std::vector<float> out(a.size());
  const auto av = a.values(), bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(av[i], bv[i]);
  return ImageGrid(a.height(), a.width(), 1, std::move(out));
}

}  // namespace

ImageGrid HdrInput::hole() const {
  return combine(m_d, m_r, [](float a, float b) { return std::max(a, b); });
}

ImageGrid occluded_region(const ImageGrid& m_ra, const ImageGrid& m_rv) {
  require_mask_pair(m_ra, m_rv, "occluded_region");
  return combine(m_ra, m_rv, [](float a, float v) { return a * (1.0f - v); });
}

ImageGrid distractor_region(const ImageGrid& m_ra, const ImageGrid& m_lv) {
  require_mask_pair(m_ra, m_lv, "distractor_region");
  return combine(m_ra, m_lv, [](float a, float l) { return (1.0f - a) * l; });
}

ImageGrid background_visible(const ImageGrid& m_ra, const ImageGrid& m_la) {
  require_mask_pair(m_ra, m_la, "background_visible");
  return combine(m_ra, m_la, [](float r, float l) { return (1.0f - r) * (1.0f - l); });
}

ImageGrid erase(const ImageGrid& i_s, const ImageGrid& m) {
  if (m.channels() != 1 || !i_s.same_extent(m)) {
    throw ShapeMismatch("erase: mask must be single-channel with the image's extent");
  }
  const std::size_t plane = static_cast<std::size_t>(i_s.height()) * i_s.width();
  std::vector<float> out(i_s.size());
  const auto iv = i_s.values(), mv = m.values();
  for (int c = 0; c < i_s.channels(); ++c) {
    for (std::size_t p = 0; p < plane; ++p) out[c * plane + p] = iv[c * plane + p] * (1.0f - mv[p]);
  }
  return ImageGrid(i_s.height(), i_s.width(), i_s.channels(), std::move(out));
}

BoundingBox mask_bbox(const ImageGrid& mask) {
  int x0 = std::numeric_limits<int>::max(), y0 = x0, x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(0, y, x) >= 0.5f) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
    }
  }
  if (x1 < 0) throw HandAbsent("empty amodal mask");
  return {static_cast<double>(x0), static_cast<double>(y0), x1 + 1.0, y1 + 1.0};
}

CropTransform crop_transform_for(const MaskQuad& q, HandSide side, double expansion, int out_size) {
  if (!(expansion > 0.0)) throw InvalidInput("crop expansion must be positive");
  if (out_size <= 0) throw InvalidInput("crop out_size must be positive");
  const BoundingBox box = mask_bbox(q.amodal(side));
  CropTransform t;
  t.center_x = 0.5 * (box.x0 + box.x1);
  t.center_y = 0.5 * (box.y0 + box.y1);
  t.side_len = expansion * std::max(box.width(), box.height());
  t.out_size = out_size;
  t.flipped = side == HandSide::kLeft;
  return t;
}

ImageGrid crop_like(const ImageGrid& img, const CropTransform& t, Interp mode) {
  return resample(img, t, mode);
}

HandCrop crop_for_hand(const ImageGrid& image, const MaskQuad& q, HandSide side, double expansion,
                       int out_size) {
  q.check_shape();
  if (!image.same_extent(q.m_ra)) throw ShapeMismatch("crop_for_hand: image and masks differ in extent");
  HandCrop crop;
  crop.side = side;
  crop.transform = crop_transform_for(q, side, expansion, out_size);
  crop.image = resample(image, crop.transform, Interp::kBilinear);
  MaskQuad m{resample(q.m_ra, crop.transform, Interp::kNearest),
             resample(q.m_rv, crop.transform, Interp::kNearest),
             resample(q.m_la, crop.transform, Interp::kNearest),
             resample(q.m_lv, crop.transform, Interp::kNearest)};
  crop.masks = side == HandSide::kLeft ? m.swapped() : m;
  return crop;
}

HdrInput build_hdr_input(const ImageGrid& i_crop, const MaskQuad& q_crop) {
  q_crop.check_shape();
  if (i_crop.channels() != 3 || !i_crop.same_extent(q_crop.m_ra)) {
    throw ShapeMismatch("build_hdr_input: image must be 3-channel with the masks' extent");
  }
  const MaskQuad q = q_crop.binarized(0.5);
  HdrInput in;
  in.m_d = occluded_region(q.m_ra, q.m_rv);
  in.m_r = distractor_region(q.m_ra, q.m_lv);
  in.i_d = erase(i_crop, in.m_d);
  in.i_r = erase(i_crop, in.m_r);
  in.m_bv = background_visible(q.m_ra, q.m_la);
  in.m_rv = q.m_rv;
  return in;
}

bool satisfies_invariants(const HdrInput& in, std::string* reason) {
  auto fail = [&](const char* why) {
    if (reason) *reason = why;
    return false;
  };
  for (const ImageGrid* m : {&in.m_rv, &in.m_bv, &in.m_d, &in.m_r}) {
    if (m->channels() != 1 || !m->same_extent(in.m_d)) return fail("mask shape");
  }
  for (const ImageGrid* i : {&in.i_d, &in.i_r}) {
    if (i->channels() != 3 || !i->same_extent(in.m_d)) return fail("image shape");
  }
  const int hw = in.m_d.height() * in.m_d.width();
  for (int p = 0; p < hw; ++p) {
    const bool d = in.m_d.values()[p] >= 0.5f, r = in.m_r.values()[p] >= 0.5f;
    if (d && in.m_rv.values()[p] >= 0.5f) return fail("occluded region overlaps the visible mask");
    for (int c = 0; c < 3; ++c) {
      if (d && in.i_d.values()[c * hw + p] != 0.0f) return fail("i_d not erased inside m_d");
      if (r && in.i_r.values()[c * hw + p] != 0.0f) return fail("i_r not erased inside m_r");
    }
  }
  return true;
}

}  // namespace hdr::maskops
