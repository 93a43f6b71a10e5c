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

#include <filesystem>

#include <nlohmann/json.hpp>

#include "hdr/core/image.hpp"
#include "hdr/core/types.hpp"

namespace hdr::io {

/// 8-bit PNG; 1-channel grids are written as grayscale, 3-channel as RGB.
void write_png(const std::filesystem::path& path, const ImageGrid& img);
/// Reads an 8-bit PNG. `channels` = 1 converts to gray, 3 to RGB.
ImageGrid read_png(const std::filesystem::path& path, int channels);

/// Rounds every value to the nearest multiple of 1/255, i.e. what a
/// write_png / read_png round trip produces.
ImageGrid quantize8(const ImageGrid& img);

nlohmann::json to_json(const CropTransform& t);
CropTransform crop_from_json(const nlohmann::json& j);

nlohmann::json joints_to_json(const JointSet& joints);
JointSet joints_from_json(const nlohmann::json& j);

/// Serializes with sorted keys and a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace hdr::io
