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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hdr/core/rng.hpp"
#include "hdr/core/types.hpp"

namespace hdr::eval {

/// Mean distance (mm) over mutually valid joints after moving each set's
/// root joint to the origin. Empty when no joint is valid in both.
std::optional<double> mpjpe(const JointSet& pred, const JointSet& gt);
/// Mean 2D distance (px) over mutually valid joints, no alignment.
std::optional<double> epe2d(const JointSet& pred, const JointSet& gt);

struct SubsetTags {
  bool single = false;       ///< one hand present
  bool interacting = false;  ///< both hands present
  bool inter = false;        ///< interacting with more than 30 valid keypoints
};

inline constexpr int kInterMinValid = 30;

/// Per-sample predictions and ground truth, indexed by HandSide (right, left).
/// A hand is present in the ground truth when it has a valid joint.
struct EvalRecord {
  std::string id;
  std::array<std::optional<JointSet>, 2> pred, gt;
  SubsetTags tags;

  /// Mean over present hands with a prediction; empty if there is none.
  std::optional<double> mpjpe() const;
  std::optional<double> epe2d() const;
};

/// Tags records from ground truth only.
void split_subsets(std::vector<EvalRecord>& records);

enum class Subset { kAll, kSingle, kInteracting, kInter };
std::string to_string(Subset s);
bool in_subset(const EvalRecord& r, Subset s);

struct Aggregate {
  double mpjpe_mm = 0.0;  ///< NaN when no record has a defined value
  double epe_px = 0.0;
  long samples = 0;  ///< records contributing a defined MPJPE
  long records = 0;  ///< records in the subset
};

/// Unweighted mean of per-sample values; empty when the subset is empty.
std::optional<Aggregate> aggregate(const std::vector<EvalRecord>& records, Subset subset);

struct ReportRow {
  std::string variant;
  Subset subset = Subset::kAll;
  double mpjpe_mm = 0.0, epe_px = 0.0;
  double delta_abs = 0.0, delta_rel = 0.0;  ///< MPJPE vs the reference variant
  long samples = 0;
};

struct AblationReport {
  std::vector<ReportRow> rows;
  std::string reference;

  std::string to_csv() const;
  std::string to_markdown() const;
  const ReportRow* find(const std::string& variant, Subset subset) const;
};

using VariantEvaluator = std::function<std::vector<EvalRecord>(const std::string& variant, RngSeed seed)>;

/// Evaluates every variant under every seed and averages the per-seed
/// aggregates. A subset gets a row when it is non-empty under every seed. Deltas are taken against the reference variant when it is listed,
/// otherwise against the first variant.
AblationReport run_ablation(const std::vector<std::string>& variants, const std::vector<RngSeed>& seeds,
                            const VariantEvaluator& evaluate, const std::string& reference = "full");

}  // namespace hdr::eval
