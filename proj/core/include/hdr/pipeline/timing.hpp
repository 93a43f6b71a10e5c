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
#include <string>
#include <vector>

#include "hdr/pipeline/infer.hpp"

namespace hdr::pipeline {

/// Reference per-frame stage times (ms) reported for HASM, HDRM and SHPE on
/// a GPU. Only their ratios are compared.
inline constexpr std::array<double, 3> kReferenceStageMs{12.6, 0.6, 34.0};
inline constexpr int kMinTimedFrames = 50;

struct TimingReport {
  int frames = 0;
  std::array<double, 3> stage_ms{};  ///< mean per frame: segment, hdr, pose
  double total_ms = 0.0;
  double total_cv = 0.0;  ///< coefficient of variation of per-frame totals

  std::array<double, 3> shares() const;
  std::string to_markdown() const;
};

/// Times the full route on the images, cycling through them until at least
/// min_frames frames are measured after one warm-up frame.
TimingReport timing_probe(const Models& models, const PipelineConfig& cfg, const std::vector<ImageGrid>& images,
                          int min_frames = kMinTimedFrames);

}  // namespace hdr::pipeline
