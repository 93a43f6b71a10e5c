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
#include <fstream>
#include <sstream>

#include "hdr/core/error.hpp"
#include "hdr/maskops/maskops.hpp"
#include "hdr/synth/generator.hpp"
#include "hdr/synth/hand.hpp"
#include "hdr/synth/render.hpp"
#include "test_util.hpp"

namespace hdr::synth {
namespace {

using Eigen::Vector2d;
using Eigen::Vector3d;

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hdr_synth_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProceduralHand hand_at(HandSide side, RngSeed seed, const Vector3d& root) {
  Rng rng(seed);
  HandPose pose = HandPose::sample(rng);
  pose.root_position = root;
  return ProceduralHand(side, pose, SkinTexture::sample(rng));
}

ImageGrid flat_background(int size) { return ImageGrid::filled(size, size, 3, 0.5f); }

TEST(HandTest, PoseLimitsAreEnforced) {
  Rng rng(RngSeed{1});
  for (int i = 0; i < 100; ++i) EXPECT_NO_THROW(HandPose::sample(rng).check_limits());
  HandPose p;
  p.finger_flexion[1][1] = 2.5;
  EXPECT_THROW(p.check_limits(), InvalidInput);
  p = HandPose{};
  p.root_position.z() = -10.0;
  EXPECT_THROW(ProceduralHand(HandSide::kRight, p, SkinTexture{}), InvalidInput);
}

TEST(HandTest, BonesHavePositiveLengthAndMirrorAcrossSides) {
  HandPose pose;
  const ProceduralHand r(HandSide::kRight, pose, SkinTexture{}), l(HandSide::kLeft, pose, SkinTexture{});
  for (int b = 0; b < kNumBones; ++b) {
    const int child = b + 1;
    EXPECT_GT((r.joints()[child] - r.joints()[child == 1 || (child - 1) % 4 == 0 ? 0 : child - 1]).norm(), 1.0);
  }
  // With no global rotation the left hand mirrors the right about the root.
  for (int j = 0; j < kNumJoints; ++j) {
    EXPECT_NEAR(l.joints()[j].x() - pose.root_position.x(), -(r.joints()[j].x() - pose.root_position.x()), 1e-9);
    EXPECT_NEAR(l.joints()[j].y(), r.joints()[j].y(), 1e-9);
    EXPECT_NEAR(l.joints()[j].z(), r.joints()[j].z(), 1e-9);
  }
}

TEST(HandTest, SegmentDistance) {
  EXPECT_NEAR(segment_distance({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}), 1.0, 1e-12);
  EXPECT_NEAR(segment_distance({0, 0, 0}, {2, 0, 0}, {1, -1, 1}, {1, 1, 1}), 1.0, 1e-12);
  EXPECT_NEAR(segment_distance({0, 0, 0}, {1, 0, 0}, {3, 0, 0}, {4, 0, 0}), 2.0, 1e-12);
  EXPECT_NEAR(segment_distance({0, 0, 0}, {0, 0, 0}, {0, 3, 4}, {0, 3, 4}), 5.0, 1e-12);
  // Brute-force oracle on random segments.
  Rng rng(RngSeed{2});
  for (int t = 0; t < 200; ++t) {
    Vector3d p[4];
    for (auto& v : p) v = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    double best = 1e9;
    for (int i = 0; i <= 200; ++i)
      for (int j = 0; j <= 200; ++j) {
        best = std::min(best, ((p[0] + (p[1] - p[0]) * (i / 200.0)) - (p[2] + (p[3] - p[2]) * (j / 200.0))).norm());
      }
    const double d = segment_distance(p[0], p[1], p[2], p[3]);
    EXPECT_LE(d, best + 1e-12);
    EXPECT_GE(d, best - 0.02);
  }
}

TEST(HandTest, ClearanceDetectsInterpenetration) {
  const ProceduralHand a = hand_at(HandSide::kRight, RngSeed{3}, {0, 0, 400});
  const ProceduralHand b = hand_at(HandSide::kLeft, RngSeed{4}, {0, 0, 400});
  EXPECT_LT(min_clearance(a, b), 0.0);
  ProceduralHand far = b;
  far.translate({0, 0, 500});
  EXPECT_GT(min_clearance(a, far), 0.0);
}

TEST(RenderTest, CapsuleIntersection) {
  const Capsule sphere{{0, 0, 10}, {0, 0, 10}, 2.0};
  EXPECT_NEAR(intersect_capsule({0, 0, 1}, sphere), 8.0, 1e-12);
  const Capsule rod{{-5, 0, 10}, {5, 0, 10}, 1.0};
  EXPECT_NEAR(intersect_capsule({0, 0, 1}, rod), 9.0, 1e-12);
  EXPECT_EQ(intersect_capsule(Vector3d(0, 1.5, 10).normalized(), rod), -1.0);
  const Capsule along{{0, 0, 10}, {0, 0, 20}, 1.0};
  EXPECT_NEAR(intersect_capsule({0, 0, 1}, along), 9.0, 1e-12);
  EXPECT_THROW(Camera::centered(32, 0.0), InvalidInput);
}

TEST(RenderTest, SingleHandHasEqualAmodalAndVisibleMasks) {
  RenderScene scene{Camera::centered(48, 1.3), hand_at(HandSide::kRight, RngSeed{5}, {0, 40, 420}), std::nullopt,
                    flat_background(48)};
  const SynthSample s = synth_render(scene);
  EXPECT_EQ(s.masks.m_rv, s.masks.m_ra);
  EXPECT_EQ(s.masks.m_la, ImageGrid::filled(48, 48, 1, 0.0f));
  EXPECT_GT(hdr::testing::count_ones(s.masks.m_ra), 20);
  EXPECT_EQ(s.target_right, s.image);
  EXPECT_TRUE(check_sample(s));
}

TEST(RenderTest, NearerLeftHandCoversRight) {
  const Camera cam = Camera::centered(48, 1.3);
  RenderScene scene{cam, hand_at(HandSide::kRight, RngSeed{6}, {0, 40, 600}),
                    hand_at(HandSide::kLeft, RngSeed{7}, {0, 40, 300}), flat_background(48)};
  const SynthSample s = synth_render(scene);
  for (std::size_t p = 0; p < s.masks.m_ra.size(); ++p) {
    const float expected = s.masks.m_ra.values()[p] * (1.0f - s.masks.m_la.values()[p]);
    ASSERT_EQ(s.masks.m_rv.values()[p], expected);
  }
  EXPECT_EQ(s.masks.m_lv, s.masks.m_la);
}

TEST(RenderTest, VisibleMasksFollowPerPixelDepthOrder) {
  const SynthConfig cfg = SynthConfig{.image_size = 48};
  Rng rng(RngSeed{8});
  for (int t = 0; t < 10; ++t) {
    const auto scene = sample_render_scene(cfg, rng);
    ASSERT_TRUE(scene.has_value());
    const SynthSample s = synth_render(*scene);
    const HandLayer r = render_layer(*scene->right, scene->camera), l = render_layer(*scene->left, scene->camera);
    for (std::size_t p = 0; p < r.depth.size(); ++p) {
      const bool right_front = r.covers(p) && (!l.covers(p) || r.depth[p] <= l.depth[p]);
      ASSERT_EQ(s.masks.m_rv.values()[p], right_front ? 1.0f : 0.0f);
      ASSERT_EQ(s.masks.m_lv.values()[p], l.covers(p) && !right_front ? 1.0f : 0.0f);
    }
    std::string why;
    EXPECT_TRUE(check_sample(s, &why)) << why;
  }
}

TEST(RenderTest, PrincipalPointShiftTranslatesMasks) {
  const Camera cam = Camera::centered(48, 1.3);
  RenderScene a{cam, hand_at(HandSide::kRight, RngSeed{9}, {-10, 40, 450}),
                hand_at(HandSide::kLeft, RngSeed{10}, {10, 40, 380}), flat_background(48)};
  RenderScene b = a;
  const int dx = 3, dy = -2;
  b.camera.cx += dx;
  b.camera.cy += dy;
  const SynthSample sa = synth_render(a), sb = synth_render(b);
  const ImageGrid* ma[4] = {&sa.masks.m_ra, &sa.masks.m_rv, &sa.masks.m_la, &sa.masks.m_lv};
  const ImageGrid* mb[4] = {&sb.masks.m_ra, &sb.masks.m_rv, &sb.masks.m_la, &sb.masks.m_lv};
  for (int k = 0; k < 4; ++k) {
    for (int y = 0; y < 48; ++y)
      for (int x = 0; x < 48; ++x) {
        if (x - dx < 0 || x - dx >= 48 || y - dy < 0 || y - dy >= 48) continue;
        ASSERT_EQ(mb[k]->at(0, y, x), ma[k]->at(0, y - dy, x - dx));
      }
  }
}

HandRecord record(HandSide side, RngSeed seed, const Vector3d& root, int size) {
  return render_record(hand_at(side, seed, root), Camera::centered(size, 1.3), flat_background(size));
}

TEST(CopyPasteTest, DisjointPlacementKeepsTargetIdentity) {
  const HandRecord r = record(HandSide::kRight, RngSeed{11}, {-60, 60, 450}, 64);
  const HandRecord l = record(HandSide::kLeft, RngSeed{12}, {0, 40, 450}, 64);
  // Shrink the pasted hand into the corner farthest from the right hand.
  Vector2d c = Vector2d::Zero();
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x)
      if (r.mask.at(0, y, x) > 0.5f) c += Vector2d(x, y) / hdr::testing::count_ones(r.mask);
  PasteParams prm{.scale = 0.2, .rotation_rad = 0.3, .center = {c.x() < 32 ? 58.0 : 6.0, c.y() < 32 ? 58.0 : 6.0}};
  const SynthSample s = paste_hand(r, l, prm);
  ASSERT_GT(hdr::testing::count_ones(s.masks.m_la), 0);
  ASSERT_EQ(hdr::testing::count_ones(maskops::occluded_region(s.masks.m_ra, s.masks.m_rv)), 0);
  EXPECT_EQ(s.masks.m_rv, s.masks.m_ra);
  // Nothing to de-occlude: the target matches the composite everywhere
  // except under the pasted distractor.
  const ImageGrid m_r = maskops::distractor_region(s.masks.m_ra, s.masks.m_lv);
  const std::size_t plane = m_r.size();
  for (std::size_t p = 0; p < plane; ++p) {
    for (int c = 0; c < 3; ++c) {
      if (m_r.values()[p] < 0.5f) ASSERT_EQ(s.target_right.values()[c * plane + p], s.image.values()[c * plane + p]);
    }
  }
  EXPECT_TRUE(check_sample(s));
}

TEST(CopyPasteTest, FullCoverHidesRightHand) {
  const HandRecord r = record(HandSide::kRight, RngSeed{13}, {0, 40, 450}, 64);
  const HandRecord l = record(HandSide::kLeft, RngSeed{14}, {0, 40, 450}, 64);
  PasteParams prm{.scale = 20.0, .center = {32.0, 32.0}};
  const SynthSample s = paste_hand(r, l, prm);
  EXPECT_EQ(hdr::testing::count_ones(s.masks.m_rv), 0);
  EXPECT_TRUE(satisfies_invariants(s.masks));
}

TEST(CopyPasteTest, EmittedSamplesFeedTheHdrInput) {
  const SynthConfig cfg = SynthConfig{.image_size = 48};
  for (long i = 0; i < 20; ++i) {
    const SynthSample s = generate_sample(i, Variant::kSyn, RngSeed{15}, cfg);
    std::string why;
    ASSERT_TRUE(check_sample(s, &why)) << why;
    const double ov = s.meta.at("overlap").get<double>();
    EXPECT_GE(ov, cfg.overlap_band.lo);
    EXPECT_LE(ov, cfg.overlap_band.hi);
    for (HandSide side : {HandSide::kRight, HandSide::kLeft}) {
      const MaskQuad q = side == HandSide::kRight ? s.masks : s.masks.swapped();
      const maskops::HdrInput in = maskops::build_hdr_input(s.image, q);
      ASSERT_TRUE(maskops::satisfies_invariants(in, &why)) << why;
      for (std::size_t p = 0; p < q.m_ra.size(); ++p) {
        const float md = q.m_ra.values()[p] > 0.5f && q.m_rv.values()[p] < 0.5f ? 1.0f : 0.0f;
        ASSERT_EQ(in.m_d.values()[p], md);
      }
    }
  }
}

TEST(DatasetTest, StratifiedMix) {
  auto count_syn = [](long n, double mix) {
    long syn = 0;
    for (long i = 0; i < n; ++i) syn += variant_for_index(i, mix) == Variant::kSyn ? 1 : 0;
    return syn;
  };
  EXPECT_EQ(count_syn(10, 1.0), 10);
  EXPECT_EQ(count_syn(10, 0.0), 0);
  EXPECT_NEAR(count_syn(1000, 0.76), 760, 1);
  EXPECT_THROW(variant_for_index(0, 1.5), InvalidInput);
}

TEST(DatasetTest, WriteReadAndDeterminism) {
  const SynthConfig cfg = SynthConfig{.image_size = 32};
  const auto a = temp_dir("a"), b = temp_dir("b");
  const auto manifest = generate_dataset(5, 0.6, RngSeed{16}, cfg, a);
  generate_dataset(5, 0.6, RngSeed{16}, cfg, b);
  EXPECT_EQ(manifest.at("counts").at("syn"), 3);
  EXPECT_EQ(manifest.at("counts").at("render"), 2);
  for (const auto& e : std::filesystem::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(e.path(), a);
    ASSERT_EQ(file_bytes(e.path()), file_bytes(b / rel)) << rel;
  }
  const auto loaded = read_dataset(a);
  ASSERT_EQ(loaded.size(), 5u);
  for (long i = 0; i < 5; ++i) {
    const SynthSample s = generate_sample(i, variant_for_index(i, 0.6), RngSeed{16}, cfg);
    EXPECT_EQ(loaded[i].image, s.image);
    EXPECT_EQ(loaded[i].masks, s.masks);
    EXPECT_EQ(loaded[i].target_left, s.target_left);
    EXPECT_EQ(loaded[i].joints_right.joints_2d, s.joints_right.joints_2d);
    EXPECT_EQ(loaded[i].joints_left.joints_3d, s.joints_left.joints_3d);
    EXPECT_EQ(loaded[i].meta, s.meta);
  }
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST(DatasetTest, RejectsBadArguments) {
  const SynthConfig cfg = SynthConfig{.image_size = 32};
  EXPECT_THROW(generate_dataset(0, 0.5, RngSeed{1}, cfg, temp_dir("bad")), InvalidInput);
  EXPECT_THROW(generate_dataset(1, 0.5, RngSeed{1}, cfg, "/proc/hdr_synth_unwritable"), IoError);
}

}  // namespace
}  // namespace hdr::synth
