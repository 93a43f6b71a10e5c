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
#include <utility>

#include "hdr/core/types.hpp"

namespace hdr::shpe {

/// Joint names and parent-child bones of the 21-keypoint hand. Joint 0 is
/// the wrist; each finger runs base to tip (thumb 1-4, index 5-8, middle
/// 9-12, ring 13-16, pinky 17-20). Bone b connects parent(b) to joint b + 1.
struct SkeletonDef {
  std::array<std::string, kNumJoints> names;
  std::array<std::pair<int, int>, kNumBones> bones;
  int root_index = 0;

  static const SkeletonDef& hand();
  /// Throws InvalidInput unless the bones form a tree rooted at root_index.
  void validate() const;
};

}  // namespace hdr::shpe
