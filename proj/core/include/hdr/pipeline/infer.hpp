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
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "hdr/maskops/maskops.hpp"
#include "hdr/pipeline/config.hpp"
#include "hdr/shpe/maps.hpp"

namespace hdr::pipeline {

/// The three trained networks.
struct Models {
  hasm::SegModel segmenter;
  hdrm::HdrNet hdr;
  shpe::PoseNet pose;

  /// Loads the three checkpoints named by the config. Missing files, wrong
  /// checkpoint kinds and incompatible crop sizes raise StageError.
  static Models load(const PipelineConfig& cfg);
  /// Fresh, seed-initialized networks with the configured shapes.
  static Models init(const PipelineConfig& cfg, RngSeed seed);
  void save(const PipelineConfig& cfg) const;

  int crop_size() const { return hdr.config().input_size; }
};

/// How the per-hand image reaches the pose network.
enum class Route {
  kBaseline,       ///< raw crop, no HDR stage
  kNoRemoval,      ///< HDR with the distractor mask cleared
  kNoDeocclusion,  ///< HDR with the occluded-region mask cleared
  kFull,
};

std::string to_string(Route r);
Route route_from_string(const std::string& s);
inline constexpr std::array<Route, 4> kAllRoutes{Route::kBaseline, Route::kNoRemoval, Route::kNoDeocclusion,
                                                 Route::kFull};

/// Runs the segmenter on a frame of any size and returns a binary quad of
/// the frame's size.
MaskQuad segment_frame(const hasm::SegModel& model, const ImageGrid& image, double threshold);

struct HandResult {
  HandSide side = HandSide::kRight;
  shpe::DecodedPose pose;  ///< source-frame 2D, root-relative 3D
  maskops::HandCrop crop;
  maskops::HdrInput hdr_input;
  ImageGrid pose_input;  ///< what the pose network saw
};

struct InferResult {
  MaskQuad masks;
  std::array<std::optional<HandResult>, 2> hands;  ///< indexed by HandSide
  std::array<std::string, 2> absent_reason;

  const std::optional<HandResult>& hand(HandSide s) const { return hands[static_cast<int>(s)]; }
};

/// Per-hand inference from a given quad (ground truth or segmenter output).
InferResult infer_with_masks(const Models& models, const PipelineConfig& cfg, const ImageGrid& image,
                             const MaskQuad& masks, Route route = Route::kFull);
/// Segment, then per hand: crop, build the HDR input, de-occlude and
/// remove, estimate the pose and map it back to the frame.
InferResult infer_image(const Models& models, const PipelineConfig& cfg, const ImageGrid& image,
                        Route route = Route::kFull);

/// {"hands": [{side, joints_2d, joints_3d, valid, confidence}], "absent": {...}}
nlohmann::json result_to_json(const InferResult& r);

}  // namespace hdr::pipeline
