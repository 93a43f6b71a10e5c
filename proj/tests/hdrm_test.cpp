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
#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "hdr/core/error.hpp"
#include "hdr/hdrm/losses.hpp"
#include "hdr/hdrm/model.hpp"
#include "hdr/hdrm/partial_conv.hpp"
#include "hdr/hdrm/trainer.hpp"
#include "hdr/nn/grid.hpp"
#include "hdr/nn/ops.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace hdr::hdrm {
namespace {

using hdr::testing::gradient_rel_error;
using hdr::testing::random_tensor;
using nn::Tensor;

oracle::Array4 to_array(const Tensor& t) {
  oracle::Array4 a(t.dim(0), t.dim(1), t.dim(2), t.dim(3));
  std::copy(t.data().begin(), t.data().end(), a.v.begin());
  return a;
}

std::vector<double> values(const Tensor& t) { return {t.data().begin(), t.data().end()}; }

Tensor random_validity(Rng& rng, int n, int h, int w, double p) {
  std::vector<double> v(static_cast<std::size_t>(n) * h * w);
  for (double& x : v) x = rng.bernoulli(p) ? 1.0 : 0.0;
  return Tensor::make({n, 1, h, w}, std::move(v));
}

TEST(PartialConvTest, AllValidEqualsConvolution) {
  Rng rng(RngSeed{41});
  for (int trial = 0; trial < 100; ++trial) {
    const int k = trial % 2 ? 3 : 5, stride = 1 + trial % 2;
    const Tensor x = random_tensor(rng, {2, 3, 9, 10}, -1, 1, false);
    const Tensor w = random_tensor(rng, {4, 3, k, k}, -1, 1, false);
    const Tensor b = random_tensor(rng, {4}, -1, 1, false);
    const auto out = partial_conv(x, Tensor::full({2, 1, 9, 10}, 1.0), w, b, stride, k / 2);
    const Tensor ref = nn::conv2d(x, w, b, stride, k / 2);
    ASSERT_EQ(values(out.features), values(ref));
    for (double v : out.validity.data()) ASSERT_EQ(v, 1.0);
  }
}

TEST(PartialConvTest, AllInvalidGivesZeros) {
  Rng rng(RngSeed{42});
  const Tensor x = random_tensor(rng, {1, 2, 6, 6}, -1, 1, false);
  const auto out = partial_conv(x, Tensor::zeros({1, 1, 6, 6}), random_tensor(rng, {3, 2, 3, 3}, -1, 1, false),
                                random_tensor(rng, {3}, -1, 1, false), 1, 0);
  for (double v : out.features.data()) EXPECT_EQ(v, 0.0);
  for (double v : out.validity.data()) EXPECT_EQ(v, 0.0);
}

TEST(PartialConvTest, FiveValidPixelsRenormalizeByNineFifths) {
  Rng rng(RngSeed{43});
  const Tensor x = random_tensor(rng, {1, 2, 3, 3}, -1, 1, false);
  const Tensor w = random_tensor(rng, {1, 2, 3, 3}, -1, 1, false);
  const Tensor b = Tensor::make({1}, {0.25});
  const Tensor m = Tensor::make({1, 1, 3, 3}, {1, 0, 1, 0, 1, 0, 1, 0, 1});
  const auto out = partial_conv(x, m, w, b, 1, 0);
  double masked = 0.0;
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < 9; ++i) masked += w.data()[c * 9 + i] * x.data()[c * 9 + i] * m.data()[i];
  EXPECT_NEAR(out.features.item(), masked * 9.0 / 5.0 + 0.25, 1e-12);
}

TEST(PartialConvTest, MatchesWindowedOracle) {
  Rng rng(RngSeed{44});
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 3 + 2 * (trial % 2), stride = 1 + (trial / 2) % 2, pad = k / 2;
    const Tensor x = random_tensor(rng, {2, 3, 8, 7}, -1, 1, false);
    const Tensor m = random_validity(rng, 2, 8, 7, rng.uniform(0.05, 0.9));
    const Tensor w = random_tensor(rng, {4, 3, k, k}, -1, 1, false);
    const Tensor b = random_tensor(rng, {4}, -1, 1, false);
    const auto out = partial_conv(x, m, w, b, stride, pad);
    oracle::Array4 ref, ref_valid;
    oracle::partial_conv(to_array(x), to_array(m), values(w), values(b), 4, k, stride, pad, ref, ref_valid);
    ASSERT_EQ(values(out.validity), ref_valid.v);
    for (std::size_t i = 0; i < ref.v.size(); ++i) ASSERT_NEAR(out.features.data()[i], ref.v[i], 1e-9);
  }
}

TEST(PartialConvTest, PerChannelValidityMatchesOracle) {
  Rng rng(RngSeed{46});
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 3 + 2 * (trial % 2), stride = 1 + (trial / 2) % 2, pad = k / 2;
    const Tensor x = random_tensor(rng, {2, 3, 8, 7}, -1, 1, false);
    std::vector<double> mv(2 * 3 * 8 * 7);
    for (double& v : mv) v = rng.bernoulli(0.4) ? 1.0 : 0.0;
    const Tensor m = Tensor::make({2, 3, 8, 7}, std::move(mv));
    const Tensor w = random_tensor(rng, {4, 3, k, k}, -1, 1, false);
    const Tensor b = random_tensor(rng, {4}, -1, 1, false);
    const auto out = partial_conv(x, m, w, b, stride, pad);
    oracle::Array4 ref, ref_valid;
    oracle::partial_conv(to_array(x), to_array(m), values(w), values(b), 4, k, stride, pad, ref, ref_valid);
    ASSERT_EQ(out.validity.dim(1), 1);
    ASSERT_EQ(values(out.validity), ref_valid.v);
    for (std::size_t i = 0; i < ref.v.size(); ++i) ASSERT_NEAR(out.features.data()[i], ref.v[i], 1e-9);
  }
}

TEST(PartialConvTest, RepeatedChannelValidityEqualsSingleChannel) {
  Rng rng(RngSeed{47});
  const Tensor x = random_tensor(rng, {1, 3, 7, 7}, -1, 1, false);
  const Tensor m = random_validity(rng, 1, 7, 7, 0.5);
  std::vector<double> rep;
  for (int c = 0; c < 3; ++c) rep.insert(rep.end(), m.data().begin(), m.data().end());
  const Tensor w = random_tensor(rng, {2, 3, 3, 3}, -1, 1, false);
  const Tensor b = random_tensor(rng, {2}, -1, 1, false);
  const auto one = partial_conv(x, m, w, b, 1, 1);
  const auto many = partial_conv(x, Tensor::make({1, 3, 7, 7}, std::move(rep)), w, b, 1, 1);
  EXPECT_EQ(values(one.validity), values(many.validity));
  for (std::size_t i = 0; i < one.features.numel(); ++i) {
    EXPECT_NEAR(one.features.data()[i], many.features.data()[i], 1e-12);
  }
}

TEST(PartialConvTest, GradientCheck) {
  Rng rng(RngSeed{45});
  const Tensor m = random_validity(rng, 1, 6, 6, 0.6);
  std::vector<Tensor> in{random_tensor(rng, {1, 2, 6, 6}), random_tensor(rng, {3, 2, 3, 3}), random_tensor(rng, {3})};
  auto f = [&](const std::vector<Tensor>& t) {
    return nn::sum_squares(partial_conv(t[0], m, t[1], t[2], 1, 1).features);
  };
  EXPECT_LT(gradient_rel_error(f, in, 1e-5), 1e-6);
}

maskops::HdrInput toy_input(Rng& rng, int size, ImageGrid* target = nullptr, bool overlap = true) {
  const auto scene = hdr::testing::toy_scene(rng, size, overlap);
  if (target) *target = scene.target;
  return maskops::build_hdr_input(scene.image, scene.masks);
}

HdrNetConfig tiny_config() {
  HdrNetConfig c = HdrNetConfig::fast();
  c.input_size = 32;
  c.widths = {8, 8, 16, 16};
  return c;
}

TEST(HdrNetTest, EmptyHoleReturnsInputExactly) {
  Rng rng(RngSeed{46});
  const HdrNet net(tiny_config(), RngSeed{1});
  const auto scene = hdr::testing::toy_scene(rng, 32, false);
  const auto in = maskops::build_hdr_input(scene.image, scene.masks);
  const ImageGrid hole = in.hole();
  for (float v : hole.values()) ASSERT_EQ(v, 0.0f);
  EXPECT_EQ(net.infer(in), scene.image);
}

TEST(HdrNetTest, ShapeRangeAndBatchDeterminism) {
  Rng rng(RngSeed{47});
  const HdrNet net(tiny_config(), RngSeed{2});
  const auto in = toy_input(rng, 32);
  nn::NoGradGuard guard;
  const HdrForward out = net.forward(make_batch({&in, &in}));
  ASSERT_EQ(out.raw.shape(), (nn::Shape{2, 3, 32, 32}));
  const std::size_t half = out.composite.numel() / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const double v = out.composite.data()[i];
    ASSERT_TRUE(std::isfinite(v) && v >= 0.0 && v <= 1.0);
    ASSERT_EQ(v, out.composite.data()[half + i]);
  }
}

TEST(HdrNetTest, RejectsWrongSizeAndBrokenInvariants) {
  Rng rng(RngSeed{48});
  const HdrNet net(tiny_config(), RngSeed{3});
  EXPECT_THROW(net.infer(toy_input(rng, 40)), ShapeMismatch);
  auto in = toy_input(rng, 32);
  in.m_d = ImageGrid::filled(32, 32, 1, 1.0f);
  EXPECT_THROW(net.infer(in), InvalidInput);
}

TEST(HdrNetTest, DecoderValidityIsMonotone) {
  Rng rng(RngSeed{49});
  const HdrNet net(tiny_config(), RngSeed{4});
  const auto in = toy_input(rng, 32);
  std::vector<Tensor> trace;
  nn::NoGradGuard guard;
  net.forward(make_batch({&in}), &trace);
  ASSERT_EQ(trace.size(), 4u);
  for (std::size_t s = 1; s < trace.size(); ++s) {
    const Tensor up = nn::upsample_nearest(trace[s - 1], trace[s].dim(2) / trace[s - 1].dim(2));
    for (std::size_t i = 0; i < up.numel(); ++i) ASSERT_GE(trace[s].data()[i], up.data()[i]);
  }
}

TEST(HdrNetTest, EachErasedImageCarriesItsOwnValidity) {
  Rng rng(RngSeed{50});
  const auto in = toy_input(rng, 32);
  const HdrBatch batch = make_batch({&in});
  ASSERT_EQ(batch.validity.shape(), (nn::Shape{1, 8, 32, 32}));
  const std::size_t plane = 32 * 32;
  const ImageGrid hole = in.hole();
  int d = 0, r = 0;
  for (std::size_t p = 0; p < plane; ++p) {
    const double md = in.m_d.values()[p], mr = in.m_r.values()[p], hv = hole.values()[p];
    d += md > 0.5;
    r += mr > 0.5;
    for (int c = 0; c < 3; ++c) {
      ASSERT_EQ(batch.validity.data()[c * plane + p], 1.0 - md);
      ASSERT_EQ(batch.validity.data()[(4 + c) * plane + p], 1.0 - mr);
    }
    ASSERT_EQ(batch.validity.data()[3 * plane + p], 1.0 - hv);
    ASSERT_EQ(batch.validity.data()[7 * plane + p], 1.0 - hv);
    ASSERT_EQ(batch.hole.data()[p], hv);
  }
  EXPECT_GT(d, 0);
  EXPECT_GT(r, 0);
}

TEST(HdrNetTest, CheckpointRoundTripIsExact) {
  Rng rng(RngSeed{50});
  const HdrNet net(tiny_config(), RngSeed{5});
  const auto in = toy_input(rng, 32);
  const auto path = std::filesystem::temp_directory_path() / "hdr_hdrnet_test.ckpt";
  nn::save_checkpoint(path, net.to_checkpoint());
  const HdrNet back = HdrNet::from_checkpoint(nn::load_checkpoint(path));
  EXPECT_EQ(net.infer(in), back.infer(in));
}

TEST(LossTest, L1Examples) {
  Rng rng(RngSeed{51});
  const Tensor a = random_tensor(rng, {1, 3, 4, 4}, 0, 0.8, false);
  EXPECT_EQ(l1_loss(a, a).item(), 0.0);
  EXPECT_NEAR(l1_loss(nn::add_scalar(a, 0.1), a).item(), 0.1, 1e-12);
  const Tensor b = random_tensor(rng, {1, 3, 4, 4}, 0, 1, false);
  double ref = 0.0;
  for (std::size_t i = 0; i < a.numel(); ++i) ref += std::abs(a.data()[i] - b.data()[i]);
  EXPECT_NEAR(l1_loss(a, b).item(), ref / a.numel(), 1e-9);
}

TEST(LossTest, PerceptualMatchesStraightLineRecomputation) {
  Rng rng(RngSeed{52});
  const FeatureExtractor phi(RngSeed{7}, {4, 6});
  const Tensor a = random_tensor(rng, {1, 3, 8, 8}, 0, 1, false);
  const Tensor b = random_tensor(rng, {1, 3, 8, 8}, 0, 1, false);
  EXPECT_EQ(perceptual_loss(a, a, phi).item(), 0.0);
  EXPECT_EQ(perceptual_loss(a, b, phi).item(), perceptual_loss(b, a, phi).item());

  auto features = [&](const Tensor& img) {
    std::vector<oracle::Array4> out;
    oracle::Array4 cur = to_array(img);
    for (std::size_t s = 0; s < phi.layers().size(); ++s) {
      const auto& conv = phi.layers()[s];
      cur = oracle::conv(cur, values(conv.weight), values(conv.bias), conv.weight.dim(0), 3, conv.stride, 1);
      for (double& v : cur.v) v = oracle::gelu(v);
      out.push_back(cur);
    }
    return out;
  };
  const auto fa = features(a), fb = features(b);
  double ref = 0.0;
  for (std::size_t s = 0; s < fa.size(); ++s) {
    double d = 0.0;
    for (std::size_t i = 0; i < fa[s].v.size(); ++i) d += std::abs(fa[s].v[i] - fb[s].v[i]);
    ref += d / fa[s].v.size();
  }
  EXPECT_NEAR(perceptual_loss(a, b, phi).item(), ref, 1e-6);
}

TEST(LossTest, GramMatchesInnerProducts) {
  Rng rng(RngSeed{53});
  const Tensor f = random_tensor(rng, {1, 2, 3, 3}, -1, 1, false);
  const Tensor g = gram(f);
  const auto ref = oracle::gram(values(f), 2, 9);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(g.data()[i], ref[i], 1e-9);
}

TEST(LossTest, StyleIsPermutationInvariant) {
  Rng rng(RngSeed{54});
  const Tensor f = random_tensor(rng, {1, 4, 5, 5}, -1, 1, false);
  std::vector<int> perm(25);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 24; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
  std::vector<double> shuffled(f.numel());
  for (int c = 0; c < 4; ++c)
    for (int p = 0; p < 25; ++p) shuffled[c * 25 + p] = f.data()[c * 25 + perm[p]];
  const Tensor g = Tensor::make(f.shape(), shuffled);
  EXPECT_EQ(style_loss({f}, {f}).item(), 0.0);
  EXPECT_NEAR(style_loss({f}, {g}).item(), 0.0, 1e-15);
}

TEST(LossTest, AdversarialTerms) {
  const Tensor zero = Tensor::zeros({1, 1, 4, 4});
  EXPECT_NEAR(discriminator_term(zero, zero).item(), 2 * std::log(2.0), 1e-12);
  EXPECT_NEAR(generator_gan_term(zero).item(), -std::log(2.0), 1e-12);
  EXPECT_LT(discriminator_term(Tensor::full({1, 1, 2, 2}, 50.0), Tensor::full({1, 1, 2, 2}, -50.0)).item(), 1e-20);

  Rng rng(RngSeed{55});
  const Tensor real = random_tensor(rng, {2, 1, 3, 3}, -4, 4, false);
  const Tensor fake = random_tensor(rng, {2, 1, 3, 3}, -4, 4, false);
  double d = 0.0, g = 0.0;
  for (std::size_t i = 0; i < real.numel(); ++i) {
    d += -std::log(oracle::sigmoid(real.data()[i])) - std::log(1.0 - oracle::sigmoid(fake.data()[i]));
    g += std::log(1.0 - oracle::sigmoid(fake.data()[i]));
  }
  EXPECT_NEAR(discriminator_term(real, fake).item(), d / real.numel(), 1e-7);
  EXPECT_NEAR(generator_gan_term(fake).item(), g / real.numel(), 1e-7);
  EXPECT_LE(generator_gan_term(fake).item(), 0.0);
}

TEST(LossTest, WeightedTotal) {
  const LossWeights w;
  EXPECT_EQ(total_loss(1.0, 1.0, 1.0, 1.0, w), 253.2);
  const Tensor one = Tensor::full({1}, 1.0);
  EXPECT_EQ(total_loss(one, one, one, one, w).item(), 253.2);
  EXPECT_EQ(total_loss(0.0, 0.0, 0.0, 0.0, w), 0.0);
  Rng rng(RngSeed{56});
  for (int i = 0; i < 100; ++i) {
    const double a = rng.uniform(-1, 0), b = rng.uniform(), c = rng.uniform(), d = rng.uniform();
    EXPECT_NEAR(total_loss(a, b, c, d, w), 0.1 * a + 3.0 * b + 0.1 * c + 250.0 * d, 1e-12);
  }
  EXPECT_THROW(total_loss(1, 1, 1, 1, LossWeights{-1, 1, 1, 1}), InvalidInput);
}

TEST(LossTest, TotalGradientWithFrozenAdversary) {
  Rng rng(RngSeed{57});
  const FeatureExtractor phi(RngSeed{8}, {4, 6});
  const Tensor target = random_tensor(rng, {1, 3, 8, 8}, 0, 1, false);
  std::vector<Tensor> in{random_tensor(rng, {1, 3, 8, 8}, 0.05, 0.95)};
  const LossWeights w;
  auto f = [&](const std::vector<Tensor>& t) {
    return total_loss(Tensor::zeros({1}), l1_loss(t[0], target), perceptual_loss(t[0], target, phi),
                      style_loss(t[0], target, phi), w);
  };
  EXPECT_LT(gradient_rel_error(f, in, 1e-3), 1e-3);
}

TEST(MaskedL1Test, OnlyCountsMaskedPixels) {
  const ImageGrid a = ImageGrid::filled(4, 4, 3, 0.5f), b = ImageGrid::filled(4, 4, 3, 0.25f);
  std::vector<float> m(16, 0.0f);
  m[3] = 1.0f;
  EXPECT_DOUBLE_EQ(masked_l1(a, b, ImageGrid(4, 4, 1, m)), 0.25);
  EXPECT_EQ(masked_l1(a, b, ImageGrid::filled(4, 4, 1, 0.0f)), 0.0);
}

std::vector<HdrExample> toy_examples(int n, int size, RngSeed seed) {
  Rng rng(seed);
  std::vector<HdrExample> out;
  for (int i = 0; i < n; ++i) {
    ImageGrid target;
    auto in = toy_input(rng, size, &target);
    out.push_back({std::move(in), std::move(target)});
  }
  return out;
}

HdrTrainConfig short_schedule(long s1, long s2) {
  HdrTrainConfig c;
  c.stage1_steps = s1;
  c.stage2_steps = s2;
  c.batch_size = 2;
  c.discriminator_widths = {4, 8, 8};
  c.feature_widths = {4, 8};
  return c;
}

TEST(HdrTrainerTest, SeededRunsAreIdentical) {
  const auto data = toy_examples(3, 32, RngSeed{60});
  auto run = [&] {
    HdrNet net(tiny_config(), RngSeed{9});
    HdrTrainer trainer(net, short_schedule(4, 0), RngSeed{10});
    std::vector<double> totals;
    for (const auto& r : trainer.run(data, nullptr)) totals.push_back(r.total);
    return totals;
  };
  EXPECT_EQ(run(), run());
}

TEST(HdrTrainerTest, ResumeMatchesUninterruptedRun) {
  const auto data = toy_examples(3, 32, RngSeed{61});
  HdrNet full_net(tiny_config(), RngSeed{11});
  HdrTrainer full(full_net, short_schedule(6, 0), RngSeed{12});
  const auto reference = full.run(data, nullptr);

  HdrNet first_net(tiny_config(), RngSeed{11});
  HdrTrainer first(first_net, short_schedule(3, 0), RngSeed{12});
  first.run(data, nullptr);
  const auto path = std::filesystem::temp_directory_path() / "hdr_trainer_resume.ckpt";
  nn::save_checkpoint(path, first.state());

  const nn::Checkpoint ck = nn::load_checkpoint(path);
  HdrNet resumed_net = HdrNet::from_checkpoint(ck);
  HdrTrainer resumed(resumed_net, short_schedule(6, 0), RngSeed{12});
  resumed.restore(ck);
  const auto tail = resumed.run(data, nullptr);
  ASSERT_EQ(tail.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(tail[i].step, reference[3 + i].step);
    EXPECT_EQ(tail[i].total, reference[3 + i].total);
    EXPECT_EQ(tail[i].gan_discriminator, reference[3 + i].gan_discriminator);
  }
}

TEST(HdrTrainerTest, SecondStageWithGroundTruthMasksContinuesFirstStage) {
  const auto data = toy_examples(3, 32, RngSeed{62});
  auto cfg_two = short_schedule(2, 3);
  cfg_two.lr_stage2 = cfg_two.lr_stage1;
  HdrNet a_net(tiny_config(), RngSeed{13});
  HdrTrainer a(a_net, cfg_two, RngSeed{14});
  const auto two_stage = a.run(data, &data);

  HdrNet b_net(tiny_config(), RngSeed{13});
  HdrTrainer b(b_net, short_schedule(5, 0), RngSeed{14});
  const auto one_stage = b.run(data, nullptr);
  ASSERT_EQ(two_stage.size(), one_stage.size());
  for (std::size_t i = 0; i < one_stage.size(); ++i) EXPECT_EQ(two_stage[i].total, one_stage[i].total);
  EXPECT_EQ(two_stage.back().stage, 2);
}

TEST(HdrTrainerTest, MissingSegmenterSkipsSecondStage) {
  const auto data = toy_examples(2, 32, RngSeed{63});
  HdrNet net(tiny_config(), RngSeed{15});
  HdrTrainer trainer(net, short_schedule(2, 5), RngSeed{16});
  std::ostringstream csv;
  EXPECT_EQ(trainer.run(data, nullptr, &csv).size(), 2u);
  EXPECT_EQ(csv.str().substr(0, 5), "step,");
  EXPECT_THROW(trainer.step({}, 1), InvalidInput);
}

TEST(HdrTrainerTest, ZeroLearningRateFreezesGenerator) {
  const auto data = toy_examples(2, 32, RngSeed{64});
  HdrNet net(tiny_config(), RngSeed{17});
  const auto before = net.to_checkpoint();
  auto cfg = short_schedule(3, 0);
  cfg.lr_stage1 = 0.0;
  HdrTrainer trainer(net, cfg, RngSeed{18});
  trainer.run(data, nullptr);
  const auto after = net.to_checkpoint();
  for (std::size_t i = 0; i < before.arrays.size(); ++i) EXPECT_EQ(before.arrays[i].data, after.arrays[i].data);
}

TEST(HdrTrainerTest, OverfitsSingleSampleWithoutAdversary) {
  const auto data = toy_examples(1, 64, RngSeed{65});
  HdrNet net(HdrNetConfig::fast(), RngSeed{19});
  HdrTrainConfig cfg;
  cfg.stage1_steps = 500;
  cfg.stage2_steps = 0;
  cfg.batch_size = 1;
  cfg.weights.gan = 0.0;
  cfg.discriminator_widths = {4, 8, 8};
  HdrTrainer trainer(net, cfg, RngSeed{20});
  const auto log = trainer.run(data, nullptr);
  ASSERT_EQ(log.size(), 500u);
  EXPECT_LT(log.back().l1, 0.1 * log.front().l1);
  EXPECT_LT(log.back().total, 0.1 * log.front().total);
  const auto& ex = data[0];
  EXPECT_LT(masked_l1(net.infer(ex.input), ex.target, ex.input.hole()), 0.05);
}

}  // namespace
}  // namespace hdr::hdrm
