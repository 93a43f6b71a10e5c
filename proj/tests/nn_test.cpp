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
#include <filesystem>

#include "hdr/core/error.hpp"
#include "hdr/nn/layers.hpp"
#include "hdr/nn/ops.hpp"
#include "hdr/nn/params.hpp"
#include "test_util.hpp"

namespace hdr::nn {
namespace {

using hdr::testing::gradient_rel_error;
using hdr::testing::random_tensor;
using Inputs = std::vector<Tensor>;

// Weighted sum with fixed random coefficients turns any op into a scalar
// whose gradient exercises every output element.
Tensor probe(const Tensor& y, std::uint64_t seed = 99) {
  Rng rng(RngSeed{seed});
  return sum(mul(y, random_tensor(rng, y.shape(), -1, 1, false)));
}

constexpr double kStep = 1e-5;
constexpr double kTol = 1e-6;

TEST(GradTest, Elementwise) {
  Rng rng(RngSeed{1});
  Inputs in{random_tensor(rng, {2, 3, 4}), random_tensor(rng, {2, 3, 4})};
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(add(t[0], t[1])); }, in, kStep), kTol);
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(sub(t[0], t[1])); }, in, kStep), kTol);
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(mul(t[0], t[1])); }, in, kStep), kTol);
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(scale(t[0], -2.5)); }, in, kStep), kTol);
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(sigmoid(t[0])); }, in, kStep), kTol);
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(gelu(t[0])); }, in, kStep), kTol);
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(softplus(t[0])); }, in, kStep), kTol);
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(leaky_relu(t[0], 0.2)); }, in, kStep), kTol);
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return sum_squares(t[0]); }, in, kStep), kTol);
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return mean(t[1]); }, in, kStep), kTol);
}

TEST(GradTest, ShapeOps) {
  Rng rng(RngSeed{2});
  Inputs in{random_tensor(rng, {2, 3, 4, 5})};
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(permute(t[0], {0, 2, 3, 1})); }, in, kStep), kTol);
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(reshape(t[0], {6, 20})); }, in, kStep), kTol);
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(slice_channels(t[0], 1, 3)); }, in, kStep), kTol);
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(upsample_nearest(t[0], 2)); }, in, kStep), kTol);
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(upsample_bilinear(t[0], 9, 7)); }, in, kStep), kTol);
  Inputs even{random_tensor(rng, {2, 3, 4, 6})};
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(avg_pool(t[0], 2)); }, even, kStep), kTol);
  Inputs two{random_tensor(rng, {2, 3, 4, 5}), random_tensor(rng, {2, 2, 4, 5})};
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(concat_channels({t[0], t[1]})); }, two, kStep), kTol);
}

TEST(GradTest, ConvolutionAndPixelOps) {
  Rng rng(RngSeed{3});
  for (int stride : {1, 2}) {
    Inputs in{random_tensor(rng, {2, 3, 7, 6}), random_tensor(rng, {4, 3, 3, 3}), random_tensor(rng, {4})};
    auto f = [stride](const Inputs& t) { return probe(conv2d(t[0], t[1], t[2], stride, 1)); };
    EXPECT_LT(gradient_rel_error(f, in, kStep), kTol) << "stride " << stride;
  }
  Inputs px{random_tensor(rng, {2, 3, 4, 4}), random_tensor(rng, {2, 1, 4, 4}), random_tensor(rng, {3})};
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(mul_pixelwise(t[0], t[1])); }, px, kStep), kTol);
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(add_channel_bias(t[0], t[2])); }, px, kStep), kTol);
}

TEST(GradTest, MatrixAndNormalization) {
  Rng rng(RngSeed{4});
  Inputs lin{random_tensor(rng, {2, 5, 6}), random_tensor(rng, {3, 6}), random_tensor(rng, {3})};
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(linear(t[0], t[1], t[2])); }, lin, kStep), kTol);
  Inputs mm{random_tensor(rng, {2, 3, 4}), random_tensor(rng, {2, 4, 5}), random_tensor(rng, {2, 5, 4})};
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(bmm(t[0], t[1])); }, mm, kStep), kTol);
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(bmm(t[0], t[2], true)); }, mm, kStep), kTol);
  Inputs sm{random_tensor(rng, {3, 7}, -3, 3)};
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(softmax_lastdim(t[0])); }, sm, kStep), kTol);
  Inputs ln{random_tensor(rng, {4, 6}), random_tensor(rng, {6}), random_tensor(rng, {6})};
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return probe(layer_norm(t[0], t[1], t[2])); }, ln, kStep), kTol);
}

TEST(GradTest, Losses) {
  Rng rng(RngSeed{5});
  Inputs ab{random_tensor(rng, {3, 4}), random_tensor(rng, {3, 4})};
  EXPECT_LT(gradient_rel_error([](const Inputs& t) { return l1_mean(t[0], t[1]); }, ab, kStep), kTol);
  std::vector<double> w(12);
  for (double& x : w) x = rng.bernoulli(0.5) ? 1.0 : 0.0;
  w[0] = 1.0;
  EXPECT_LT(gradient_rel_error([&](const Inputs& t) { return weighted_mse(t[0], t[1], w); }, ab, kStep), kTol);
  Tensor target = Tensor::make({3, 4}, std::vector<double>(w));
  Inputs p{random_tensor(rng, {3, 4}, 0.05, 0.95)};
  EXPECT_LT(gradient_rel_error([&](const Inputs& t) { return bce_mean(t[0], target); }, p, 1e-6), 1e-6);
}

TEST(GradTest, TransformerBlock) {
  Rng rng(RngSeed{6});
  for (int reduction : {1, 2}) {
    ParamStore ps;
    TransformerBlock block(ps, "blk", 8, 2, 2, reduction, rng);
    Inputs in{random_tensor(rng, {2, 8, 4, 4})};
    for (const auto& [name, t] : ps.items()) in.push_back(t);
    EXPECT_LT(gradient_rel_error([&](const Inputs& t) { return probe(block(t[0])); }, in, kStep), 1e-5);
  }
}

TEST(Conv2dTest, MatchesDirectLoops) {
  Rng rng(RngSeed{7});
  const Tensor x = random_tensor(rng, {2, 3, 9, 8}, -1, 1, false);
  const Tensor w = random_tensor(rng, {5, 3, 3, 3}, -1, 1, false);
  const Tensor b = random_tensor(rng, {5}, -1, 1, false);
  for (int stride : {1, 2}) {
    const Tensor y = conv2d(x, w, b, stride, 1);
    const int ho = y.dim(2), wo = y.dim(3);
    double max_diff = 0.0;
    for (int n = 0; n < 2; ++n)
      for (int o = 0; o < 5; ++o)
        for (int oy = 0; oy < ho; ++oy)
          for (int ox = 0; ox < wo; ++ox) {
            double acc = b.data()[o];
            for (int c = 0; c < 3; ++c)
              for (int ky = 0; ky < 3; ++ky)
                for (int kx = 0; kx < 3; ++kx) {
                  const int iy = oy * stride - 1 + ky, ix = ox * stride - 1 + kx;
                  if (iy < 0 || ix < 0 || iy >= 9 || ix >= 8) continue;
                  acc += w.data()[((o * 3 + c) * 3 + ky) * 3 + kx] * x.data()[((n * 3 + c) * 9 + iy) * 8 + ix];
                }
            max_diff = std::max(max_diff, std::abs(acc - y.data()[((n * 5 + o) * ho + oy) * wo + ox]));
          }
    EXPECT_LT(max_diff, 1e-12);
  }
}

TEST(Conv2dTest, RejectsMismatchedWeights) {
  const Tensor x = Tensor::zeros({1, 3, 8, 8});
  EXPECT_THROW(conv2d(x, Tensor::zeros({4, 2, 3, 3}), Tensor(), 1, 1), ShapeMismatch);
}

TEST(BlendTest, ExactSelectionOnBinaryMask) {
  Rng rng(RngSeed{8});
  const Tensor a = random_tensor(rng, {1, 3, 4, 4}, 0, 1, false);
  const Tensor b = random_tensor(rng, {1, 3, 4, 4}, 0, 1, false);
  std::vector<double> m(16, 0.0);
  m[5] = 1.0;
  const Tensor out = blend(a, b, Tensor::make({1, 1, 4, 4}, m));
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 16; ++i) EXPECT_EQ(out.data()[c * 16 + i], i == 5 ? a.data()[c * 16 + i] : b.data()[c * 16 + i]);
}

TEST(BceTest, RejectsNonBinaryTargets) {
  EXPECT_THROW(bce_mean(Tensor::full({2}, 0.5), Tensor::full({2}, 0.3)), InvalidInput);
}

TEST(NoGradTest, NoHistoryRecorded) {
  Tensor p = Tensor::full({3}, 1.0, true);
  NoGradGuard guard;
  EXPECT_FALSE(scale(p, 2.0).requires_grad());
}

TEST(CheckpointTest, SaveLoadRoundTripIsBitExact) {
  Rng rng(RngSeed{9});
  ParamStore ps;
  Conv2d conv(ps, "conv", 3, 4, 3, 1, 1, rng);
  Linear fc(ps, "fc", 4, 2, rng);
  Checkpoint ck;
  ck.config = {{"name", "toy"}, {"width", 4}};
  export_params(ps, ck);
  const auto path = std::filesystem::temp_directory_path() / "hdr_nn_test.ckpt";
  save_checkpoint(path, ck);
  const Checkpoint back = load_checkpoint(path);
  EXPECT_EQ(back.config, ck.config);

  Rng other(RngSeed{10});
  ParamStore ps2;
  Conv2d conv2(ps2, "conv", 3, 4, 3, 1, 1, other);
  Linear fc2(ps2, "fc", 4, 2, other);
  import_params(ps2, back);
  for (std::size_t i = 0; i < ps.items().size(); ++i) {
    const auto a = ps.items()[i].second.data();
    const auto b = ps2.items()[i].second.data();
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  }
  ParamStore wrong;
  Conv2d bad(wrong, "conv", 3, 5, 3, 1, 1, other);
  EXPECT_THROW(import_params(wrong, back), ShapeMismatch);
}

TEST(AdamTest, ZeroLearningRateLeavesWeightsUnchanged) {
  Rng rng(RngSeed{11});
  ParamStore ps;
  Linear fc(ps, "fc", 4, 3, rng);
  const std::vector<double> before(fc.weight.data().begin(), fc.weight.data().end());
  Adam opt(ps, AdamConfig{.lr = 0.0});
  for (int i = 0; i < 5; ++i) {
    ps.zero_grad();
    backward(sum_squares(fc(random_tensor(rng, {2, 4}, -1, 1, false))));
    opt.step();
  }
  EXPECT_TRUE(std::equal(before.begin(), before.end(), fc.weight.data().begin()));
}

TEST(AdamTest, MinimizesQuadratic) {
  ParamStore ps;
  Tensor p = ps.add("p", Tensor::make({2}, {3.0, -2.0}));
  Adam opt(ps, AdamConfig{.lr = 0.1});
  for (int i = 0; i < 300; ++i) {
    ps.zero_grad();
    backward(sum_squares(p));
    opt.step();
  }
  EXPECT_LT(std::abs(p.data()[0]), 1e-2);
  EXPECT_LT(std::abs(p.data()[1]), 1e-2);
}

}  // namespace
}  // namespace hdr::nn
