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

#include "hdr/pipeline/infer.hpp"

namespace hdr::pipeline {

inline constexpr int kPanelTiles = 5;
inline constexpr int kPanelGap = 4;

/// One row of tiles: input, mask overlay, right HDR output, left HDR output
/// and the decoded skeletons over the input. Frames smaller than min_tile
/// pixels are upscaled by an integer factor; absent hands show a gray tile.
ImageGrid render_panel(const ImageGrid& image, const InferResult& result, int min_tile = 256);

}  // namespace hdr::pipeline
