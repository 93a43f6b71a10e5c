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

#include <map>
#include <ostream>
#include <vector>

#include "hdr/eval/metrics.hpp"
#include "hdr/pipeline/infer.hpp"

namespace hdr::pipeline {

/// Frame and masks resized to the segmenter input.
std::vector<hasm::SegExample> segmentation_examples(const std::vector<synth::SynthSample>& samples, int size);

/// One example per present hand. With a segmenter, crops and masks come from
/// its predictions (second training stage); the target is cropped with the
/// same transform so that it lines up with the input.
std::vector<hdrm::HdrExample> hdr_examples(const std::vector<synth::SynthSample>& samples, int size, double expansion,
                                           const hasm::SegModel* segmenter = nullptr, double threshold = 0.5);

/// Clean single-hand crops (the removal targets) with crop-frame joints.
std::vector<shpe::PoseExample> pose_examples(const std::vector<synth::SynthSample>& samples, int size,
                                             double expansion);

/// True when either hand has a hidden part.
bool is_occluded(const synth::SynthSample& s);

/// Generates samples [first, first + n) of the stream defined by seed.
std::vector<synth::SynthSample> generate_samples(long first, long n, double mix, RngSeed seed,
                                                 const synth::SynthConfig& cfg);

struct TrainLogs {
  std::ostream* hasm = nullptr;
  std::ostream* hdrm = nullptr;
  std::ostream* shpe = nullptr;
  std::ostream* progress = nullptr;
};

/// Trains the segmenter, then the HDR network (ground-truth masks, then
/// segmenter masks) and the pose network on clean crops.
Models train_models(const PipelineConfig& cfg, const std::vector<synth::SynthSample>& train, RngSeed seed,
                    const TrainLogs& logs = {});

/// Records for every route, segmenting each frame once. Ground truth
/// decides which hands are present.
std::map<Route, std::vector<eval::EvalRecord>> evaluate_routes(const Models& models, const PipelineConfig& cfg,
                                                               const std::vector<synth::SynthSample>& samples,
                                                               const std::vector<Route>& routes);

struct ExperimentConfig {
  long train_samples = 2000;
  long test_samples = 200;  ///< occluded held-out samples
  double mix = 0.5;
  RngSeed data_seed{2024};
  std::vector<RngSeed> seeds{RngSeed{1}, RngSeed{2}, RngSeed{3}};
};

/// Trains one model set per seed on a shared training set and evaluates all
/// four routes on held-out occluded samples.
eval::AblationReport run_experiment(const PipelineConfig& cfg, const ExperimentConfig& exp,
                                    std::ostream* progress = nullptr);

}  // namespace hdr::pipeline
