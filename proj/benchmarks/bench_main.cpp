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
#include <benchmark/benchmark.h>

#include "hdr/eval/metrics.hpp"
#include "hdr/hdrm/partial_conv.hpp"
#include "hdr/maskops/maskops.hpp"
#include "hdr/nn/ops.hpp"
#include "hdr/pipeline/infer.hpp"
#include "hdr/shpe/maps.hpp"
#include "hdr/synth/generator.hpp"

namespace {

using namespace hdr;

const synth::SynthSample& sample(int size) {
  static const synth::SynthSample s64 = synth::generate_sample(0, synth::Variant::kSyn, RngSeed{1}, synth::SynthConfig::fast());
  static const synth::SynthSample s256 = synth::generate_sample(0, synth::Variant::kSyn, RngSeed{1}, synth::SynthConfig{});
  return size == 64 ? s64 : s256;
}

const pipeline::PipelineConfig& fast_config() {
  static const pipeline::PipelineConfig cfg = pipeline::PipelineConfig::fast_mode();
  return cfg;
}

const pipeline::Models& fast_models() {
  static const pipeline::Models m = pipeline::Models::init(fast_config(), RngSeed{2});
  return m;
}

void BM_BuildHdrInput(benchmark::State& state) {
  const auto& s = sample(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(maskops::build_hdr_input(s.image, s.masks));
}
BENCHMARK(BM_BuildHdrInput)->Arg(64)->Arg(256);

void BM_CropForHand(benchmark::State& state) {
  const auto& s = sample(256);
  for (auto _ : state) {
    benchmark::DoNotOptimize(maskops::crop_for_hand(s.image, s.masks, HandSide::kLeft, 1.3, 256));
  }
}
BENCHMARK(BM_CropForHand);

void BM_PartialConv(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0)), ch = 32;
  Rng rng(RngSeed{3});
  std::vector<double> x(static_cast<std::size_t>(ch) * size * size), m(static_cast<std::size_t>(size) * size);
  for (auto& v : x) v = rng.uniform(-1, 1);
  for (auto& v : m) v = rng.uniform() < 0.7 ? 1.0 : 0.0;
  std::vector<double> w(static_cast<std::size_t>(ch) * ch * 9);
  for (auto& v : w) v = rng.uniform(-0.1, 0.1);
  const auto xt = nn::Tensor::make({1, ch, size, size}, x);
  const auto mt = nn::Tensor::make({1, 1, size, size}, m);
  const auto wt = nn::Tensor::make({ch, ch, 3, 3}, w);
  const auto bt = nn::Tensor::zeros({ch});
  nn::NoGradGuard guard;
  for (auto _ : state) benchmark::DoNotOptimize(hdrm::partial_conv(xt, mt, wt, bt, 1, 1));
}
BENCHMARK(BM_PartialConv)->Arg(32)->Arg(64);

void BM_Segment(benchmark::State& state) {
  const auto& s = sample(64);
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::segment_frame(fast_models().segmenter, s.image, 0.5));
}
BENCHMARK(BM_Segment)->Unit(benchmark::kMillisecond);

void BM_HdrInfer(benchmark::State& state) {
  const auto& s = sample(64);
  const auto crop = maskops::crop_for_hand(s.image, s.masks, HandSide::kRight, 1.3, 64);
  const auto in = maskops::build_hdr_input(crop.image, crop.masks);
  for (auto _ : state) benchmark::DoNotOptimize(fast_models().hdr.infer(in));
}
BENCHMARK(BM_HdrInfer)->Unit(benchmark::kMillisecond);

void BM_PosePredictDecode(benchmark::State& state) {
  const auto& s = sample(64);
  const auto crop = maskops::crop_for_hand(s.image, s.masks, HandSide::kRight, 1.3, 64);
  for (auto _ : state) {
    const auto maps = fast_models().pose.predict(crop.image);
    benchmark::DoNotOptimize(shpe::decode_pose(maps, crop.transform, 100.0));
  }
}
BENCHMARK(BM_PosePredictDecode)->Unit(benchmark::kMillisecond);

void BM_InferImage(benchmark::State& state) {
  const auto& s = sample(64);
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::infer_image(fast_models(), fast_config(), s.image));
}
BENCHMARK(BM_InferImage)->Unit(benchmark::kMillisecond);

void BM_GenerateSample(benchmark::State& state) {
  auto cfg = synth::SynthConfig::fast();
  cfg.image_size = static_cast<int>(state.range(1));
  const auto variant = state.range(0) == 0 ? synth::Variant::kSyn : synth::Variant::kRender;
  long i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(synth::generate_sample(i++, variant, RngSeed{4}, cfg));
}
BENCHMARK(BM_GenerateSample)->Args({0, 64})->Args({1, 64})->Args({0, 256})->Args({1, 256})->Unit(benchmark::kMillisecond);

void BM_Mpjpe(benchmark::State& state) {
  const auto& s = sample(256);
  JointSet other = s.joints_right;
  for (auto& p : other.joints_3d) p.x() += 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(eval::mpjpe(other, s.joints_right));
}
BENCHMARK(BM_Mpjpe);

}  // namespace

BENCHMARK_MAIN();
