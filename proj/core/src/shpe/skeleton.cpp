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
#include "hdr/shpe/skeleton.hpp"

#include <vector>

#include "hdr/core/error.hpp"

namespace hdr::shpe {

const SkeletonDef& SkeletonDef::hand() {
  static const SkeletonDef def = [] {
    SkeletonDef d;
    const char* fingers[5] = {"thumb", "index", "middle", "ring", "pinky"};
    const char* thumb[4] = {"cmc", "mcp", "ip", "tip"};
    const char* other[4] = {"mcp", "pip", "dip", "tip"};
    d.names[0] = "wrist";
    for (int f = 0; f < 5; ++f) {
      for (int k = 0; k < 4; ++k) {
        const int j = 1 + 4 * f + k;
        d.names[j] = std::string(fingers[f]) + "_" + (f == 0 ? thumb[k] : other[k]);
        d.bones[j - 1] = {k == 0 ? 0 : j - 1, j};
      }
    }
    d.validate();
    return d;
  }();
  return def;
}

void SkeletonDef::validate() const {
  if (root_index < 0 || root_index >= kNumJoints) throw InvalidInput("skeleton: root out of range");
  std::vector<int> parent(kNumJoints, -1);
  for (const auto& [p, c] : bones) {
    if (p < 0 || p >= kNumJoints || c < 0 || c >= kNumJoints || c == root_index || parent[c] != -1) {
      throw InvalidInput("skeleton: bones do not form a tree");
    }
    parent[c] = p;
  }
  for (int j = 0; j < kNumJoints; ++j) {
    int cur = j, hops = 0;
    while (cur != root_index) {
      cur = parent[cur];
      if (cur < 0 || ++hops > kNumJoints) throw InvalidInput("skeleton: joint " + names[j] + " not connected to root");
    }
  }
}

}  // namespace hdr::shpe
