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
#include "hdr/synth/generator.hpp"

#include <algorithm>
#include <cmath>

#include "hdr/core/error.hpp"
#include "hdr/core/io.hpp"
#include "hdr/maskops/maskops.hpp"

namespace hdr::synth {

using Eigen::Vector2d;
using Eigen::Vector3d;

namespace {

constexpr double kDegToRad = M_PI / 180.0;
constexpr int kJointSlack = 3;

ImageGrid grid(int h, int w, int c, std::vector<float> v) { return ImageGrid(h, w, c, std::move(v)); }

JointSet project_joints(const ProceduralHand& hand, const Camera& camera) {
  JointSet js;
  const auto& j3 = hand.joints();
  for (int j = 0; j < kNumJoints; ++j) {
    js.joints_2d[j] = camera.project(j3[j]);
    js.joints_3d[j] = j3[j] - j3[js.root_index];
    const Vector2d& p = js.joints_2d[j];
    js.valid[j] = p.x() >= 0.0 && p.y() >= 0.0 && p.x() < camera.width && p.y() < camera.height;
  }
  return js;
}

Vector3d joint_centroid(const ProceduralHand& hand) {
  Vector3d c = Vector3d::Zero();
  for (const auto& j : hand.joints()) c += j;
  return c / kNumJoints;
}

// Moves the hand so its joint centroid projects to uv at the given depth.
void place(ProceduralHand& hand, const Camera& camera, const Vector2d& uv, double depth) {
  const Vector3d target((uv.x() - camera.cx) / camera.focal * depth, (uv.y() - camera.cy) / camera.focal * depth, depth);
  hand.translate(target - joint_centroid(hand));
}

std::size_t count(const ImageGrid& m) {
  std::size_t n = 0;
  for (float v : m.values()) n += v > 0.5f ? 1 : 0;
  return n;
}

double overlap_fraction(const ImageGrid& m_ra, const ImageGrid& m_la) {
  std::size_t both = 0, right = 0;
  for (std::size_t p = 0; p < m_ra.size(); ++p) {
    const bool r = m_ra.values()[p] > 0.5f;
    right += r ? 1 : 0;
    both += r && m_la.values()[p] > 0.5f ? 1 : 0;
  }
  return right ? static_cast<double>(both) / right : 0.0;
}

Vector2d mask_centroid(const ImageGrid& m) {
  Vector2d c = Vector2d::Zero();
  std::size_t n = 0;
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      if (m.at(0, y, x) > 0.5f) {
        c += Vector2d(x + 0.5, y + 0.5);
        ++n;
      }
    }
  if (n == 0) throw HandAbsent("paste: source hand mask is empty");
  return c / static_cast<double>(n);
}

nlohmann::json camera_json(const Camera& c) {
  return {{"focal", c.focal}, {"cx", c.cx}, {"cy", c.cy}, {"width", c.width}, {"height", c.height}};
}

nlohmann::json vec_json(const Vector3d& v) { return {v.x(), v.y(), v.z()}; }

ProceduralHand random_hand(HandSide side, const Camera& camera, Rng& rng, SkinTexture texture,
                           const Vector2d& uv, double depth) {
  HandPose pose = HandPose::sample(rng);
  pose.root_position = {0.0, 0.0, depth};
  ProceduralHand hand(side, pose, std::move(texture), rng.uniform(0.9, 1.1));
  place(hand, camera, uv, depth);
  return hand;
}

Vector2d jittered_center(const Camera& camera, Rng& rng, double spread) {
  return {camera.cx + rng.uniform(-spread, spread) * camera.width, camera.cy + rng.uniform(-spread, spread) * camera.height};
}

}  // namespace

std::string to_string(Variant v) { return v == Variant::kSyn ? "syn" : "render"; }

Variant variant_from_string(const std::string& s) {
  if (s == "syn") return Variant::kSyn;
  if (s == "render") return Variant::kRender;
  throw InvalidInput("unknown generator variant: " + s);
}

SynthConfig SynthConfig::fast() {
  SynthConfig c;
  c.image_size = 64;
  return c;
}

void SynthConfig::validate() const {
  if (image_size < 8) throw InvalidInput("synth: image size must be at least 8");
  if (!(focal_scale > 0.0)) throw InvalidInput("synth: focal scale must be positive");
  if (!(root_depth_mm.lo > 0.0 && root_depth_mm.lo <= root_depth_mm.hi)) throw InvalidInput("synth: bad depth range");
  if (!(overlap_band.lo >= 0.0 && overlap_band.lo <= overlap_band.hi && overlap_band.hi <= 1.0)) {
    throw InvalidInput("synth: overlap band must lie in [0, 1]");
  }
  if (!(paste_scale.lo > 0.0 && paste_scale.lo <= paste_scale.hi)) throw InvalidInput("synth: bad paste scale range");
  if (paste_rotation_deg < 0.0 || color_jitter < 0.0 || color_match < 0.0) {
    throw InvalidInput("synth: augmentation ranges must be non-negative");
  }
  if (max_retries <= 0) throw InvalidInput("synth: max retries must be positive");
}

nlohmann::json SynthConfig::to_json() const {
  return {{"image_size", image_size},
          {"focal_scale", focal_scale},
          {"root_depth_mm", {root_depth_mm.lo, root_depth_mm.hi}},
          {"overlap_band", {overlap_band.lo, overlap_band.hi}},
          {"paste_scale", {paste_scale.lo, paste_scale.hi}},
          {"paste_rotation_deg", paste_rotation_deg},
          {"color_jitter", color_jitter},
          {"color_match", color_match},
          {"max_retries", max_retries}};
}

SynthConfig SynthConfig::from_json(const nlohmann::json& j) {
  SynthConfig c;
  auto range = [&](const char* key, Range& r) {
    if (!j.contains(key)) return;
    const auto v = j.at(key).get<std::vector<double>>();
    if (v.size() != 2) throw InvalidInput(std::string("synth: ") + key + " must have two values");
    r = {v[0], v[1]};
  };
  c.image_size = j.value("image_size", c.image_size);
  c.focal_scale = j.value("focal_scale", c.focal_scale);
  range("root_depth_mm", c.root_depth_mm);
  range("overlap_band", c.overlap_band);
  range("paste_scale", c.paste_scale);
  c.paste_rotation_deg = j.value("paste_rotation_deg", c.paste_rotation_deg);
  c.color_jitter = j.value("color_jitter", c.color_jitter);
  c.color_match = j.value("color_match", c.color_match);
  c.max_retries = j.value("max_retries", c.max_retries);
  return c;
}

HandRecord render_record(const ProceduralHand& hand, const Camera& camera, const ImageGrid& background) {
  if (background.height() != camera.height || background.width() != camera.width || background.channels() != 3) {
    throw ShapeMismatch("render_record: background does not match the camera");
  }
  const HandLayer layer = render_layer(hand, camera);
  const std::size_t plane = layer.depth.size();
  std::vector<float> img(background.values().begin(), background.values().end());
  Vector3d sum = Vector3d::Zero();
  std::size_t n = 0;
  for (std::size_t p = 0; p < plane; ++p) {
    if (!layer.covers(p)) continue;
    for (int c = 0; c < 3; ++c) img[c * plane + p] = layer.color[c * plane + p];
  }
  HandRecord r;
  r.image = io::quantize8(grid(camera.height, camera.width, 3, std::move(img)));
  r.mask = layer.mask();
  r.clean_plate = io::quantize8(background);
  r.joints = project_joints(hand, camera);
  r.side = hand.side();
  for (std::size_t p = 0; p < plane; ++p) {
    if (!layer.covers(p)) continue;
    for (int c = 0; c < 3; ++c) sum[c] += r.image.values()[c * plane + p];
    ++n;
  }
  r.mean_color = n ? Vector3d(sum / static_cast<double>(n)) : Vector3d::Zero();
  return r;
}

SynthSample paste_hand(const HandRecord& right, const HandRecord& left, const PasteParams& prm) {
  const int h = right.image.height(), w = right.image.width();
  if (!right.mask.same_extent(right.image) || !left.image.same_extent(left.mask) || !right.clean_plate.same_shape(right.image)) {
    throw ShapeMismatch("paste: record images and masks differ in size");
  }
  if (!(prm.scale > 0.0)) throw InvalidInput("paste: scale must be positive");
  const Vector2d src_center = mask_centroid(left.mask);
  const double cs = std::cos(prm.rotation_rad), sn = std::sin(prm.rotation_rad);
  const std::size_t plane = static_cast<std::size_t>(h) * w, lplane = static_cast<std::size_t>(left.image.height()) * left.image.width();

  std::vector<float> img(right.image.values().begin(), right.image.values().end());
  std::vector<float> plate(right.clean_plate.values().begin(), right.clean_plate.values().end());
  std::vector<float> pasted(plane, 0.0f);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = (x + 0.5 - prm.center.x()) / prm.scale, dy = (y + 0.5 - prm.center.y()) / prm.scale;
      const double sx = src_center.x() + cs * dx + sn * dy, sy = src_center.y() - sn * dx + cs * dy;
      const int ix = static_cast<int>(std::floor(sx)), iy = static_cast<int>(std::floor(sy));
      if (ix < 0 || iy < 0 || ix >= left.mask.width() || iy >= left.mask.height() || left.mask.at(0, iy, ix) < 0.5f) {
        continue;
      }
      const std::size_t p = static_cast<std::size_t>(y) * w + x, q = static_cast<std::size_t>(iy) * left.mask.width() + ix;
      pasted[p] = 1.0f;
      for (int c = 0; c < 3; ++c) {
        const float v = static_cast<float>(std::clamp(left.image.values()[c * lplane + q] * (1.0 + prm.jitter[c]), 0.0, 1.0));
        img[c * plane + p] = v;
        plate[c * plane + p] = v;
      }
    }
  }

  SynthSample s;
  s.image = io::quantize8(grid(h, w, 3, std::move(img)));
  s.target_right = right.image;
  s.target_left = io::quantize8(grid(h, w, 3, std::move(plate)));
  std::vector<float> rv(plane);
  for (std::size_t p = 0; p < plane; ++p) rv[p] = right.mask.values()[p] > 0.5f && pasted[p] == 0.0f ? 1.0f : 0.0f;
  const ImageGrid la = grid(h, w, 1, std::move(pasted));
  s.masks = MaskQuad{binarize(right.mask), grid(h, w, 1, std::move(rv)), la, la};

  s.joints_right = right.joints;
  s.joints_left = left.joints;
  for (int j = 0; j < kNumJoints; ++j) {
    const Vector2d d = left.joints.joints_2d[j] - src_center;
    const Vector2d p = prm.center + prm.scale * Vector2d(cs * d.x() - sn * d.y(), sn * d.x() + cs * d.y());
    s.joints_left.joints_2d[j] = p;
    const Vector3d& q = left.joints.joints_3d[j];
    s.joints_left.joints_3d[j] = {cs * q.x() - sn * q.y(), sn * q.x() + cs * q.y(), q.z()};
    s.joints_left.valid[j] = left.joints.valid[j] && p.x() >= 0.0 && p.y() >= 0.0 && p.x() < w && p.y() < h;
  }
  s.meta = {{"variant", "syn"},
            {"augmentation",
             {{"scale", prm.scale},
              {"rotation_deg", prm.rotation_rad / kDegToRad},
              {"center", {prm.center.x(), prm.center.y()}},
              {"jitter", vec_json(prm.jitter)}}},
            {"left_target", true}};
  return s;
}

std::optional<SynthSample> synth_copy_paste(const HandRecord& right, const HandRecord& left, const SynthConfig& cfg,
                                            RngSeed seed) {
  cfg.validate();
  if (count(right.mask) == 0 || count(left.mask) == 0) return std::nullopt;
  Rng rng(seed);
  const Vector2d right_center = mask_centroid(right.mask);
  const double right_extent = std::sqrt(static_cast<double>(count(right.mask)));
  const double left_extent = std::sqrt(static_cast<double>(count(left.mask)));
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    PasteParams prm;
    prm.scale = rng.uniform(cfg.paste_scale.lo, cfg.paste_scale.hi);
    prm.rotation_rad = rng.uniform(-cfg.paste_rotation_deg, cfg.paste_rotation_deg) * kDegToRad;
    for (int c = 0; c < 3; ++c) prm.jitter[c] = rng.uniform(-cfg.color_jitter, cfg.color_jitter);
    const double angle = rng.uniform(0.0, 2.0 * M_PI);
    const double dist = rng.uniform(0.0, 0.5 * (right_extent + prm.scale * left_extent));
    prm.center = right_center + dist * Vector2d(std::cos(angle), std::sin(angle));
    SynthSample s = paste_hand(right, left, prm);
    const double ov = overlap_fraction(s.masks.m_ra, s.masks.m_la);
    if (ov >= cfg.overlap_band.lo && ov <= cfg.overlap_band.hi) {
      s.meta["overlap"] = ov;
      s.meta["placement_attempt"] = attempt;
      return s;
    }
  }
  return std::nullopt;
}

SynthSample synth_render(const RenderScene& scene) {
  const Camera& cam = scene.camera;
  cam.validate();
  const int h = cam.height, w = cam.width;
  if (scene.background.height() != h || scene.background.width() != w || scene.background.channels() != 3) {
    throw ShapeMismatch("synth_render: background does not match the camera");
  }
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  const HandLayer empty{w, h, std::vector<double>(plane, std::numeric_limits<double>::infinity()),
                        std::vector<float>(3 * plane, 0.0f)};
  const HandLayer lr = scene.right ? render_layer(*scene.right, cam) : empty;
  const HandLayer ll = scene.left ? render_layer(*scene.left, cam) : empty;

  const auto bg = scene.background.values();
  std::vector<float> img(3 * plane), tr(3 * plane), tl(3 * plane);
  std::vector<float> ra(plane), rv(plane), la(plane), lv(plane);
  for (std::size_t p = 0; p < plane; ++p) {
    const bool hr = lr.covers(p), hl = ll.covers(p);
    const bool right_front = hr && (!hl || lr.depth[p] <= ll.depth[p]);
    const bool left_front = hl && !right_front;
    ra[p] = hr;
    la[p] = hl;
    rv[p] = right_front;
    lv[p] = left_front;
    for (int c = 0; c < 3; ++c) {
      const std::size_t i = c * plane + p;
      tr[i] = hr ? lr.color[i] : bg[i];
      tl[i] = hl ? ll.color[i] : bg[i];
      img[i] = right_front ? lr.color[i] : left_front ? ll.color[i] : bg[i];
    }
  }
  SynthSample s;
  s.image = io::quantize8(grid(h, w, 3, std::move(img)));
  s.target_right = io::quantize8(grid(h, w, 3, std::move(tr)));
  s.target_left = io::quantize8(grid(h, w, 3, std::move(tl)));
  s.masks = MaskQuad{grid(h, w, 1, std::move(ra)), grid(h, w, 1, std::move(rv)), grid(h, w, 1, std::move(la)),
                     grid(h, w, 1, std::move(lv))};
  s.meta = {{"variant", "render"}, {"camera", camera_json(cam)}, {"left_target", true}};
  if (scene.right) {
    s.joints_right = project_joints(*scene.right, cam);
    s.meta["root_right_mm"] = vec_json(scene.right->joints()[0]);
  }
  if (scene.left) {
    s.joints_left = project_joints(*scene.left, cam);
    s.meta["root_left_mm"] = vec_json(scene.left->joints()[0]);
  }
  return s;
}

std::optional<RenderScene> sample_render_scene(const SynthConfig& cfg, Rng& rng, const std::vector<ImageGrid>* bgs) {
  cfg.validate();
  const Camera cam = Camera::centered(cfg.image_size, cfg.focal_scale);
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    const double depth = rng.uniform(cfg.root_depth_mm.lo, cfg.root_depth_mm.hi);
    ProceduralHand right = random_hand(HandSide::kRight, cam, rng, SkinTexture::sample(rng),
                                       jittered_center(cam, rng, 0.1), depth);
    const Vector2d rc = cam.project(joint_centroid(right));
    const double angle = rng.uniform(0.0, 2.0 * M_PI), dist = rng.uniform(0.0, 0.35) * cfg.image_size;
    const double dz = (rng.bernoulli(0.5) ? -1.0 : 1.0) * rng.uniform(25.0, 90.0);
    ProceduralHand left = random_hand(HandSide::kLeft, cam, rng, SkinTexture::sample(rng),
                                      rc + dist * Vector2d(std::cos(angle), std::sin(angle)), depth + dz);
    if (min_clearance(right, left) < 0.0) continue;
    const double ov = overlap_fraction(render_layer(right, cam).mask(), render_layer(left, cam).mask());
    if (ov < cfg.overlap_band.lo || ov > cfg.overlap_band.hi) continue;
    return RenderScene{cam, std::move(right), std::move(left), make_background(rng, cam.height, cam.width, bgs)};
  }
  return std::nullopt;
}

Variant variant_for_index(long i, double mix) {
  if (!(mix >= 0.0 && mix <= 1.0)) throw InvalidInput("synth: mix must lie in [0, 1]");
  return std::floor((i + 1) * mix) > std::floor(i * mix) ? Variant::kSyn : Variant::kRender;
}

SynthSample generate_sample(long index, Variant variant, RngSeed seed, const SynthConfig& cfg,
                            const std::vector<ImageGrid>* bgs) {
  cfg.validate();
  const RngSeed base = derive_seed(seed, static_cast<std::uint64_t>(index));
  const Camera cam = Camera::centered(cfg.image_size, cfg.focal_scale);
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    Rng rng(derive_seed(base, static_cast<std::uint64_t>(attempt)));
    std::optional<SynthSample> s;
    if (variant == Variant::kRender) {
      if (auto scene = sample_render_scene(cfg, rng, bgs)) s = synth_render(*scene);
    } else {
      const SkinTexture tex = SkinTexture::sample(rng);
      const ProceduralHand rh = random_hand(HandSide::kRight, cam, rng, tex, jittered_center(cam, rng, 0.1),
                                            rng.uniform(cfg.root_depth_mm.lo, cfg.root_depth_mm.hi));
      const ImageGrid rbg = make_background(rng, cam.height, cam.width, bgs);
      const ProceduralHand lh = random_hand(HandSide::kLeft, cam, rng, SkinTexture::similar_to(tex, rng),
                                            jittered_center(cam, rng, 0.1),
                                            rng.uniform(cfg.root_depth_mm.lo, cfg.root_depth_mm.hi));
      const ImageGrid lbg = make_background(rng, cam.height, cam.width, bgs);
      const HandRecord right = render_record(rh, cam, rbg), left = render_record(lh, cam, lbg);
      if ((right.mean_color - left.mean_color).norm() > cfg.color_match) continue;
      s = synth_copy_paste(right, left, cfg, RngSeed{rng.next()});
      if (s) s->meta["camera"] = camera_json(cam);
    }
    if (!s) continue;
    s->meta["id"] = sample_id(index);
    s->meta["seed"] = base.value;
    s->meta["attempt"] = attempt;
    return *std::move(s);
  }
  throw Error("synth: no valid " + to_string(variant) + " sample for index " + std::to_string(index) + " after " +
              std::to_string(cfg.max_retries) + " attempts");
}

bool check_sample(const SynthSample& s, std::string* reason) {
  auto fail = [&](const std::string& why) {
    if (reason) *reason = why;
    return false;
  };
  if (!satisfies_invariants(s.masks, reason)) return false;
  for (const ImageGrid* m : {&s.masks.m_ra, &s.masks.m_rv, &s.masks.m_la, &s.masks.m_lv}) {
    if (!is_binary(*m)) return fail("masks are not binary");
  }
  if (!s.target_right.same_shape(s.image) || !s.target_left.same_shape(s.image)) return fail("target shape");
  const std::size_t plane = s.masks.m_ra.size();
  for (HandSide side : {HandSide::kRight, HandSide::kLeft}) {
    const MaskQuad q = side == HandSide::kRight ? s.masks : s.masks.swapped();
    const ImageGrid m_d = maskops::occluded_region(q.m_ra, q.m_rv);
    const ImageGrid m_r = maskops::distractor_region(q.m_ra, q.m_lv);
    const auto& target = s.target(side);
    for (std::size_t p = 0; p < plane; ++p) {
      if (m_d.values()[p] > 0.5f || m_r.values()[p] > 0.5f) continue;
      for (int c = 0; c < 3; ++c) {
        if (target.values()[c * plane + p] != s.image.values()[c * plane + p]) {
          return fail(std::string(hdr::to_string(side)) + " target differs from the image outside the hole");
        }
      }
    }
    const ImageGrid& amodal = q.m_ra;
    const JointSet& js = s.joints(side);
    for (int j = 0; j < kNumJoints; ++j) {
      if (!js.valid[j]) continue;
      const int jx = static_cast<int>(std::floor(js.joints_2d[j].x())), jy = static_cast<int>(std::floor(js.joints_2d[j].y()));
      bool near = false;
      for (int y = std::max(0, jy - kJointSlack); y <= std::min(amodal.height() - 1, jy + kJointSlack) && !near; ++y)
        for (int x = std::max(0, jx - kJointSlack); x <= std::min(amodal.width() - 1, jx + kJointSlack) && !near; ++x)
          near = amodal.at(0, y, x) > 0.5f;
      if (!near) return fail(std::string(hdr::to_string(side)) + " joint " + std::to_string(j) + " outside its mask");
    }
  }
  return true;
}

std::string sample_id(long index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06ld", index);
  return buf;
}

void write_sample(const std::filesystem::path& out, const std::string& id, const SynthSample& s) {
  io::write_png(out / "images" / (id + ".png"), s.image);
  io::write_png(out / "masks" / (id + "_ra.png"), s.masks.m_ra);
  io::write_png(out / "masks" / (id + "_rv.png"), s.masks.m_rv);
  io::write_png(out / "masks" / (id + "_la.png"), s.masks.m_la);
  io::write_png(out / "masks" / (id + "_lv.png"), s.masks.m_lv);
  io::write_png(out / "targets" / (id + "_right.png"), s.target_right);
  io::write_png(out / "targets" / (id + "_left.png"), s.target_left);
  nlohmann::json meta = s.meta;
  meta["joints_right"] = io::joints_to_json(s.joints_right);
  meta["joints_left"] = io::joints_to_json(s.joints_left);
  io::write_json(out / "meta" / (id + ".json"), meta);
}

SynthSample read_sample(const std::filesystem::path& dir, const std::string& id) {
  SynthSample s;
  s.image = io::read_png(dir / "images" / (id + ".png"), 3);
  s.masks = MaskQuad{io::read_png(dir / "masks" / (id + "_ra.png"), 1), io::read_png(dir / "masks" / (id + "_rv.png"), 1),
                     io::read_png(dir / "masks" / (id + "_la.png"), 1), io::read_png(dir / "masks" / (id + "_lv.png"), 1)};
  s.target_right = io::read_png(dir / "targets" / (id + "_right.png"), 3);
  s.target_left = io::read_png(dir / "targets" / (id + "_left.png"), 3);
  s.meta = io::read_json(dir / "meta" / (id + ".json"));
  s.joints_right = io::joints_from_json(s.meta.at("joints_right"));
  s.joints_left = io::joints_from_json(s.meta.at("joints_left"));
  s.meta.erase("joints_right");
  s.meta.erase("joints_left");
  return s;
}

nlohmann::json generate_dataset(long n, double mix, RngSeed seed, const SynthConfig& cfg,
                                const std::filesystem::path& out, const std::vector<ImageGrid>* bgs) {
  if (n < 1) throw InvalidInput("synth: n must be at least 1");
  if (!(mix >= 0.0 && mix <= 1.0)) throw InvalidInput("synth: mix must lie in [0, 1]");
  cfg.validate();
  std::error_code ec;
  for (const char* sub : {"images", "masks", "targets", "meta"}) {
    std::filesystem::create_directories(out / sub, ec);
    if (ec) throw IoError("cannot create " + (out / sub).string() + ": " + ec.message());
  }
  nlohmann::json samples = nlohmann::json::array();
  long syn = 0;
  for (long i = 0; i < n; ++i) {
    const Variant v = variant_for_index(i, mix);
    syn += v == Variant::kSyn ? 1 : 0;
    const SynthSample s = generate_sample(i, v, seed, cfg, bgs);
    write_sample(out, sample_id(i), s);
    samples.push_back({{"id", sample_id(i)}, {"variant", to_string(v)}, {"seed", s.meta.at("seed")}});
  }
  nlohmann::json manifest = {{"n", n},
                             {"mix", mix},
                             {"seed", seed.value},
                             {"config", cfg.to_json()},
                             {"counts", {{"syn", syn}, {"render", n - syn}}},
                             {"samples", samples}};
  io::write_json(out / "manifest.json", manifest);
  return manifest;
}

std::vector<SynthSample> read_dataset(const std::filesystem::path& dir) {
  const nlohmann::json manifest = io::read_json(dir / "manifest.json");
  std::vector<SynthSample> out;
  for (const auto& entry : manifest.at("samples")) out.push_back(read_sample(dir, entry.at("id").get<std::string>()));
  return out;
}

}  // namespace hdr::synth
