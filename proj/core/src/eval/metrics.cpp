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
#include "hdr/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hdr/core/error.hpp"

namespace hdr::eval {

namespace {

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

constexpr Subset kSubsets[] = {Subset::kAll, Subset::kSingle, Subset::kInteracting, Subset::kInter};

}  // namespace

std::optional<double> mpjpe(const JointSet& pred, const JointSet& gt) {
  const Eigen::Vector3d pr = pred.joints_3d[pred.root_index], gr = gt.joints_3d[gt.root_index];
  double sum = 0.0;
  int n = 0;
  for (int j = 0; j < kNumJoints; ++j) {
    if (!pred.valid[j] || !gt.valid[j]) continue;
    sum += ((pred.joints_3d[j] - pr) - (gt.joints_3d[j] - gr)).norm();
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::optional<double> epe2d(const JointSet& pred, const JointSet& gt) {
  double sum = 0.0;
  int n = 0;
  for (int j = 0; j < kNumJoints; ++j) {
    if (!pred.valid[j] || !gt.valid[j]) continue;
    sum += (pred.joints_2d[j] - gt.joints_2d[j]).norm();
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

namespace {

template <typename F>
std::optional<double> mean_over_hands(const EvalRecord& r, F metric) {
  double sum = 0.0;
  int n = 0;
  for (int s = 0; s < 2; ++s) {
    if (!r.gt[s] || r.gt[s]->valid_count() == 0 || !r.pred[s]) continue;
    if (const auto v = metric(*r.pred[s], *r.gt[s])) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

}  // namespace

std::optional<double> EvalRecord::mpjpe() const {
  return mean_over_hands(*this, [](const JointSet& p, const JointSet& g) { return eval::mpjpe(p, g); });
}

std::optional<double> EvalRecord::epe2d() const {
  return mean_over_hands(*this, [](const JointSet& p, const JointSet& g) { return eval::epe2d(p, g); });
}

void split_subsets(std::vector<EvalRecord>& records) {
  for (auto& r : records) {
    int present = 0, valid = 0;
    for (const auto& g : r.gt) {
      if (g && g->valid_count() > 0) {
        ++present;
        valid += g->valid_count();
      }
    }
    r.tags.single = present == 1;
    r.tags.interacting = present == 2;
    r.tags.inter = r.tags.interacting && valid > kInterMinValid;
  }
}

std::string to_string(Subset s) {
  switch (s) {
    case Subset::kAll:
      return "all";
    case Subset::kSingle:
      return "SH";
    case Subset::kInteracting:
      return "IH";
    case Subset::kInter:
      return "Inter";
  }
  return "?";
}

bool in_subset(const EvalRecord& r, Subset s) {
  switch (s) {
    case Subset::kAll:
      return true;
    case Subset::kSingle:
      return r.tags.single;
    case Subset::kInteracting:
      return r.tags.interacting;
    case Subset::kInter:
      return r.tags.inter;
  }
  return false;
}

std::optional<Aggregate> aggregate(const std::vector<EvalRecord>& records, Subset subset) {
  Aggregate a;
  double epe_sum = 0.0;
  long epe_n = 0;
  for (const auto& r : records) {
    if (!in_subset(r, subset)) continue;
    ++a.records;
    if (const auto m = r.mpjpe()) {
      a.mpjpe_mm += *m;
      ++a.samples;
    }
    if (const auto e = r.epe2d()) {
      epe_sum += *e;
      ++epe_n;
    }
  }
  if (a.records == 0) return std::nullopt;
  a.mpjpe_mm = a.samples ? a.mpjpe_mm / static_cast<double>(a.samples) : std::nan("");
  a.epe_px = epe_n ? epe_sum / static_cast<double>(epe_n) : std::nan("");
  return a;
}

std::string AblationReport::to_csv() const {
  std::ostringstream os;
  os << "variant,subset,MPJPE_mm,EPE_px,delta_abs,delta_rel,samples\n";
  for (const auto& r : rows) {
    os << r.variant << ',' << to_string(r.subset) << ',' << fixed(r.mpjpe_mm, 4) << ',' << fixed(r.epe_px, 4) << ','
       << fixed(r.delta_abs, 4) << ',' << fixed(r.delta_rel, 6) << ',' << r.samples << '\n';
  }
  return os.str();
}

std::string AblationReport::to_markdown() const {
  std::ostringstream os;
  os << "| variant | subset | MPJPE_mm | EPE_px | Δabs | Δrel |\n";
  os << "|---|---|---:|---:|---:|---:|\n";
  for (const auto& r : rows) {
    const std::string sign = r.delta_abs > 0 ? "+" : "";
    os << "| " << r.variant << " | " << to_string(r.subset) << " | " << fixed(r.mpjpe_mm, 2) << " | "
       << fixed(r.epe_px, 2) << " | " << sign << fixed(r.delta_abs, 2) << " | " << sign << fixed(100.0 * r.delta_rel, 1)
       << (std::isnan(r.delta_rel) ? " |\n" : "% |\n");
  }
  return os.str();
}

const ReportRow* AblationReport::find(const std::string& variant, Subset subset) const {
  for (const auto& r : rows) {
    if (r.variant == variant && r.subset == subset) return &r;
  }
  return nullptr;
}

AblationReport run_ablation(const std::vector<std::string>& variants, const std::vector<RngSeed>& seeds,
                            const VariantEvaluator& evaluate, const std::string& reference) {
  if (variants.empty()) throw InvalidInput("ablation: no variants");
  if (seeds.empty()) throw InvalidInput("ablation: no seeds");
  AblationReport report;
  report.reference = std::find(variants.begin(), variants.end(), reference) != variants.end() ? reference : variants[0];

  for (const auto& v : variants) {
    std::array<ReportRow, 4> acc;
    std::array<int, 4> present{}, with_mpjpe{}, with_epe{};
    for (RngSeed seed : seeds) {
      auto records = evaluate(v, seed);
      split_subsets(records);
      for (int k = 0; k < 4; ++k) {
        const auto a = aggregate(records, kSubsets[k]);
        if (!a) continue;
        ++present[k];
        acc[k].samples += a->samples;
        if (!std::isnan(a->mpjpe_mm)) {
          acc[k].mpjpe_mm += a->mpjpe_mm;
          ++with_mpjpe[k];
        }
        if (!std::isnan(a->epe_px)) {
          acc[k].epe_px += a->epe_px;
          ++with_epe[k];
        }
      }
    }
    for (int k = 0; k < 4; ++k) {
      if (present[k] != static_cast<int>(seeds.size())) continue;
      ReportRow row = acc[k];
      row.variant = v;
      row.subset = kSubsets[k];
      row.mpjpe_mm = with_mpjpe[k] ? row.mpjpe_mm / with_mpjpe[k] : std::nan("");
      row.epe_px = with_epe[k] ? row.epe_px / with_epe[k] : std::nan("");
      report.rows.push_back(row);
    }
  }
  for (auto& row : report.rows) {
    const ReportRow* ref = report.find(report.reference, row.subset);
    if (!ref) continue;
    row.delta_abs = row.mpjpe_mm - ref->mpjpe_mm;
    row.delta_rel = ref->mpjpe_mm > 0.0 || std::isnan(ref->mpjpe_mm) ? row.delta_abs / ref->mpjpe_mm : 0.0;
  }
  return report;
}

}  // namespace hdr::eval
