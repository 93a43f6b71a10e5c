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

#include <string>

#include "hdr/core/image.hpp"
#include "hdr/core/types.hpp"

namespace hdr::maskops {

/// The per-hand bundle consumed by the de-occlusion/removal network, for a
/// crop whose target hand occupies the right-hand role.
struct HdrInput {
  ImageGrid i_d;   ///< image with the occluded part of the target erased (3ch)
  ImageGrid m_rv;  ///< visible mask of the target
  ImageGrid i_r;   ///< image with the distractor erased (3ch)
  ImageGrid m_bv;  ///< visible background
  ImageGrid m_d;   ///< occluded region of the target
  ImageGrid m_r;   ///< region occupied by the distractor

  /// Union of m_d and m_r: the pixels the network has to synthesize.
  ImageGrid hole() const;
};

/// m_ra * (1 - m_rv): where the target hand is hidden.
ImageGrid occluded_region(const ImageGrid& m_ra, const ImageGrid& m_rv);
/// (1 - m_ra) * m_lv: where the distractor is seen outside the target.
ImageGrid distractor_region(const ImageGrid& m_ra, const ImageGrid& m_lv);
/// i_s * (1 - m), broadcast over channels.
ImageGrid erase(const ImageGrid& i_s, const ImageGrid& m);
/// (1 - m_ra) * (1 - m_la)
ImageGrid background_visible(const ImageGrid& m_ra, const ImageGrid& m_la);

struct HandCrop {
  ImageGrid image;
  MaskQuad masks;  ///< roles normalized: the cropped hand is always "right"
  CropTransform transform;
  HandSide side = HandSide::kRight;
};

inline constexpr double kDefaultCropExpansion = 1.3;

/// Continuous-coordinate bounding box [x0, x1) x [y0, y1) of mask >= 0.5.
struct BoundingBox {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};
/// Throws HandAbsent when the mask is empty.
BoundingBox mask_bbox(const ImageGrid& mask);

/// Square crop transform centered on the amodal bounding box of `side`.
CropTransform crop_transform_for(const MaskQuad& q, HandSide side, double expansion, int out_size);

/// Crops image (bilinear) and masks (nearest) around one hand. Left hands are
/// mirrored and the quad's roles swapped so that the crop always shows a
/// right-role target. Throws HandAbsent for an empty amodal mask.
HandCrop crop_for_hand(const ImageGrid& image, const MaskQuad& q, HandSide side,
                       double expansion = kDefaultCropExpansion, int out_size = 256);

/// Crops an arbitrary grid with the transform of an existing crop (used for
/// target images that must line up with the network input).
ImageGrid crop_like(const ImageGrid& img, const CropTransform& t, Interp mode);

/// Applies the occluded/distractor/erase/background algebra to a crop.
/// Soft quads are binarized at 0.5 first.
HdrInput build_hdr_input(const ImageGrid& i_crop, const MaskQuad& q_crop);

/// Common extent, channel counts, m_d disjoint from m_rv, and i_d / i_r zero
/// inside m_d / m_r. Fills \`reason\` on failure.
bool satisfies_invariants(const HdrInput& in, std::string* reason = nullptr);

}  // namespace hdr::maskops
