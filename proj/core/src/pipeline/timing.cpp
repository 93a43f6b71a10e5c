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
#include "hdr/pipeline/timing.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hdr::pipeline {

namespace {

using Clock = std::chrono::steady_clock;

double ms(Clock::time_point a, Clock::time_point b) { return std::chrono::duration<double, std::milli>(b - a).count(); }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::array<double, 3> time_frame(const Models& models, const PipelineConfig& cfg, const ImageGrid& image) {
  std::array<double, 3> t{};
  auto t0 = Clock::now();
  const MaskQuad masks = segment_frame(models.segmenter, image, cfg.mask_threshold);
  t[0] = ms(t0, Clock::now());
  for (HandSide side : {HandSide::kRight, HandSide::kLeft}) {
    t0 = Clock::now();
    maskops::HandCrop crop;
    try {
      crop = maskops::crop_for_hand(image, masks, side, cfg.crop_expansion, models.crop_size());
    } catch (const HandAbsent&) {
      t[1] += ms(t0, Clock::now());
      continue;
    }
    const ImageGrid restored = models.hdr.infer(maskops::build_hdr_input(crop.image, crop.masks));
    t[1] += ms(t0, Clock::now());
    t0 = Clock::now();
    const auto pose = shpe::decode_pose(models.pose.predict(restored), crop.transform,
                                        models.pose.config().depth_scale_mm);
    t[2] += ms(t0, Clock::now());
    (void)pose;
  }
  return t;
}

}  // namespace

std::array<double, 3> TimingReport::shares() const {
  std::array<double, 3> s{};
  const double sum = stage_ms[0] + stage_ms[1] + stage_ms[2];
  for (int i = 0; i < 3; ++i) s[i] = sum > 0.0 ? stage_ms[i] / sum : 0.0;
  return s;
}

std::string TimingReport::to_markdown() const {
  static const char* kNames[] = {"HASM", "HDRM", "SHPE"};
  const double ref_sum = kReferenceStageMs[0] + kReferenceStageMs[1] + kReferenceStageMs[2];
  const auto s = shares();
  std::ostringstream os;
  os << "frames: " << frames << ", mean total " << fixed(total_ms, 2) << " ms, CV " << fixed(total_cv, 4) << "\n\n";
  os << "| stage | ms/frame | share | reference ms | reference share |\n";
  os << "|---|---:|---:|---:|---:|\n";
  for (int i = 0; i < 3; ++i) {
    os << "| " << kNames[i] << " | " << fixed(stage_ms[i], 3) << " | " << fixed(100.0 * s[i], 1) << "% | "
       << fixed(kReferenceStageMs[i], 1) << " | " << fixed(100.0 * kReferenceStageMs[i] / ref_sum, 1) << "% |\n";
  }
  return os.str();
}

TimingReport timing_probe(const Models& models, const PipelineConfig& cfg, const std::vector<ImageGrid>& images,
                          int min_frames) {
  if (images.empty()) throw InvalidInput("timing: no images");
  if (min_frames < 1) throw InvalidInput("timing: min_frames must be positive");
  time_frame(models, cfg, images[0]);
  const int frames = std::max<int>(min_frames, static_cast<int>(images.size()));
  TimingReport r;
  r.frames = frames;
  std::vector<double> totals;
  totals.reserve(static_cast<std::size_t>(frames));
  for (int f = 0; f < frames; ++f) {
    const auto t = time_frame(models, cfg, images[static_cast<std::size_t>(f) % images.size()]);
    for (int i = 0; i < 3; ++i) r.stage_ms[i] += t[i];
    totals.push_back(t[0] + t[1] + t[2]);
  }
  for (double& v : r.stage_ms) v /= frames;
  double mean = 0.0;
  for (double v : totals) mean += v;
  mean /= frames;
  double var = 0.0;
  for (double v : totals) var += (v - mean) * (v - mean);
  var /= frames;
  r.total_ms = mean;
  r.total_cv = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
  return r;
}

}  // namespace hdr::pipeline
