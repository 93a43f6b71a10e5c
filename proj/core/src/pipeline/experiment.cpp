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
#include "hdr/pipeline/experiment.hpp"

#include <chrono>

#include "hdr/shpe/maps.hpp"

namespace hdr::pipeline {

namespace {

bool any_pixel(const ImageGrid& m) {
  for (float v : m.values()) {
    if (v >= 0.5f) return true;
  }
  return false;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<hasm::SegExample> segmentation_examples(const std::vector<synth::SynthSample>& samples, int size) {
  std::vector<hasm::SegExample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    hasm::SegExample ex;
    const bool same = s.image.height() == size && s.image.width() == size;
    ex.image = same ? s.image : resize(s.image, size, size);
    ex.masks = same ? s.masks : MaskQuad{resize(s.masks.m_ra, size, size), resize(s.masks.m_rv, size, size),
                                         resize(s.masks.m_la, size, size), resize(s.masks.m_lv, size, size)}
                                    .binarized();
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<hdrm::HdrExample> hdr_examples(const std::vector<synth::SynthSample>& samples, int size, double expansion,
                                           const hasm::SegModel* segmenter, double threshold) {
  std::vector<hdrm::HdrExample> out;
  for (const auto& s : samples) {
    const MaskQuad masks = segmenter ? segment_frame(*segmenter, s.image, threshold) : s.masks;
    for (HandSide side : {HandSide::kRight, HandSide::kLeft}) {
      if (!any_pixel(s.masks.amodal(side))) continue;
      maskops::HandCrop crop;
      try {
        crop = maskops::crop_for_hand(s.image, masks, side, expansion, size);
      } catch (const HandAbsent&) {
        continue;
      }
      hdrm::HdrExample ex;
      ex.input = maskops::build_hdr_input(crop.image, crop.masks);
      ex.target = maskops::crop_like(s.target(side), crop.transform, Interp::kBilinear);
      out.push_back(std::move(ex));
    }
  }
  return out;
}

std::vector<shpe::PoseExample> pose_examples(const std::vector<synth::SynthSample>& samples, int size,
                                             double expansion) {
  std::vector<shpe::PoseExample> out;
  for (const auto& s : samples) {
    for (HandSide side : {HandSide::kRight, HandSide::kLeft}) {
      if (!any_pixel(s.masks.amodal(side))) continue;
      const CropTransform t = maskops::crop_transform_for(s.masks, side, expansion, size);
      out.push_back({maskops::crop_like(s.target(side), t, Interp::kBilinear), shpe::to_crop_frame(s.joints(side), t)});
    }
  }
  return out;
}

bool is_occluded(const synth::SynthSample& s) {
  return any_pixel(maskops::occluded_region(s.masks.m_ra, s.masks.m_rv)) ||
         any_pixel(maskops::occluded_region(s.masks.m_la, s.masks.m_lv));
}

std::vector<synth::SynthSample> generate_samples(long first, long n, double mix, RngSeed seed,
                                                 const synth::SynthConfig& cfg) {
  std::vector<synth::SynthSample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long i = first; i < first + n; ++i) {
    out.push_back(synth::generate_sample(i, synth::variant_for_index(i, mix), seed, cfg));
  }
  return out;
}

Models train_models(const PipelineConfig& cfg, const std::vector<synth::SynthSample>& train, RngSeed seed,
                    const TrainLogs& logs) {
  if (train.empty()) throw InvalidInput("train_models: no training samples");
  Models m = Models::init(cfg, seed);
  auto note = [&](const std::string& what, std::chrono::steady_clock::time_point t0) {
    if (logs.progress) *logs.progress << "  " << what << " trained in " << seconds_since(t0) << " s\n" << std::flush;
  };

  auto t0 = std::chrono::steady_clock::now();
  {
    const auto data = segmentation_examples(train, cfg.hasm_model.input_size);
    hasm::SegTrainer trainer(m.segmenter, cfg.hasm_train, derive_seed(seed, 11));
    trainer.run(data, logs.hasm);
  }
  note("hasm", t0);

  t0 = std::chrono::steady_clock::now();
  {
    const int size = cfg.hdrm_model.input_size;
    const auto stage1 = hdr_examples(train, size, cfg.crop_expansion);
    const auto stage2 = hdr_examples(train, size, cfg.crop_expansion, &m.segmenter, cfg.mask_threshold);
    hdrm::HdrTrainer trainer(m.hdr, cfg.hdrm_train, derive_seed(seed, 12));
    trainer.run(stage1, stage2.empty() ? nullptr : &stage2, logs.hdrm);
  }
  note("hdrm", t0);

  t0 = std::chrono::steady_clock::now();
  {
    const auto data = pose_examples(train, cfg.shpe_model.input_size, cfg.crop_expansion);
    shpe::PoseTrainer trainer(m.pose, cfg.shpe_train, derive_seed(seed, 13));
    trainer.run(data, logs.shpe);
  }
  note("shpe", t0);
  return m;
}

std::map<Route, std::vector<eval::EvalRecord>> evaluate_routes(const Models& models, const PipelineConfig& cfg,
                                                               const std::vector<synth::SynthSample>& samples,
                                                               const std::vector<Route>& routes) {
  std::map<Route, std::vector<eval::EvalRecord>> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const MaskQuad masks = segment_frame(models.segmenter, s.image, cfg.mask_threshold);
    for (Route r : routes) {
      const InferResult res = infer_with_masks(models, cfg, s.image, masks, r);
      eval::EvalRecord rec;
      rec.id = s.meta.value("id", synth::sample_id(static_cast<long>(i)));
      for (HandSide side : {HandSide::kRight, HandSide::kLeft}) {
        const int k = static_cast<int>(side);
        if (any_pixel(s.masks.amodal(side))) rec.gt[k] = s.joints(side);
        if (res.hands[k]) rec.pred[k] = res.hands[k]->pose.joints;
      }
      out[r].push_back(std::move(rec));
    }
  }
  for (auto& [r, records] : out) eval::split_subsets(records);
  return out;
}

eval::AblationReport run_experiment(const PipelineConfig& cfg, const ExperimentConfig& exp, std::ostream* progress) {
  if (exp.train_samples <= 0 || exp.test_samples <= 0) throw InvalidInput("experiment: sample counts must be positive");
  auto t0 = std::chrono::steady_clock::now();
  const auto train = generate_samples(0, exp.train_samples, exp.mix, exp.data_seed, cfg.synth);
  std::vector<synth::SynthSample> test;
  const RngSeed test_seed = derive_seed(exp.data_seed, 0x7e57);
  for (long i = 0; static_cast<long>(test.size()) < exp.test_samples; ++i) {
    auto s = synth::generate_sample(i, synth::variant_for_index(i, exp.mix), test_seed, cfg.synth);
    if (is_occluded(s)) test.push_back(std::move(s));
  }
  if (progress) *progress << "generated " << train.size() << " train / " << test.size() << " test samples in "
                          << seconds_since(t0) << " s\n" << std::flush;

  const std::vector<Route> routes(kAllRoutes.begin(), kAllRoutes.end());
  std::map<std::uint64_t, std::map<Route, std::vector<eval::EvalRecord>>> cache;
  auto evaluate = [&](const std::string& variant, RngSeed seed) {
    auto it = cache.find(seed.value);
    if (it == cache.end()) {
      if (progress) *progress << "seed " << seed.value << "\n" << std::flush;
      TrainLogs logs;
      logs.progress = progress;
      const Models models = train_models(cfg, train, seed, logs);
      it = cache.emplace(seed.value, evaluate_routes(models, cfg, test, routes)).first;
    }
    return it->second.at(route_from_string(variant));
  };
  std::vector<std::string> names;
  for (Route r : routes) names.push_back(to_string(r));
  return eval::run_ablation(names, exp.seeds, evaluate, to_string(Route::kFull));
}

}  // namespace hdr::pipeline
