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
#include "hdr/pipeline/infer.hpp"

#include <filesystem>

#include "hdr/core/io.hpp"

namespace hdr::pipeline {

namespace {

nn::Checkpoint load_stage(const std::string& stage, const std::filesystem::path& path, const std::string& kind) {
  if (!std::filesystem::exists(path)) throw StageError(stage, "checkpoint not found: " + path.string());
  nn::Checkpoint ck;
  try {
    ck = nn::load_checkpoint(path);
  } catch (const Error& e) {
    throw StageError(stage, e.what());
  }
  const std::string found = ck.config.value("kind", std::string());
  if (found != kind) throw StageError(stage, path.string() + " holds a '" + found + "' checkpoint");
  return ck;
}

template <typename F>
auto stage(const std::string& name, F fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const HandAbsent&) {
    throw;
  } catch (const ShapeMismatch& e) {
    throw StageError(name, e.what());
  }
}

ImageGrid zeros_like(const ImageGrid& m) { return ImageGrid::filled(m.height(), m.width(), m.channels(), 0.0f); }

}  // namespace

Models Models::load(const PipelineConfig& cfg) {
  auto seg = hasm::SegModel::from_checkpoint(load_stage("hasm", cfg.hasm_checkpoint, "segmenter"));
  auto hdr = stage("hdrm", [&] { return hdrm::HdrNet::from_checkpoint(load_stage("hdrm", cfg.hdrm_checkpoint, "hdrnet")); });
  auto pose = shpe::PoseNet::from_checkpoint(load_stage("shpe", cfg.shpe_checkpoint, "posenet"));
  if (hdr.config().input_size != pose.config().input_size) {
    throw StageError("shpe", "input size " + std::to_string(pose.config().input_size) + " differs from the hdrm crop size " +
                                 std::to_string(hdr.config().input_size));
  }
  return Models{std::move(seg), std::move(hdr), std::move(pose)};
}

Models Models::init(const PipelineConfig& cfg, RngSeed seed) {
  return Models{hasm::SegModel(cfg.hasm_model, derive_seed(seed, 1)), hdrm::HdrNet(cfg.hdrm_model, derive_seed(seed, 2)),
                shpe::PoseNet(cfg.shpe_model, derive_seed(seed, 3))};
}

void Models::save(const PipelineConfig& cfg) const {
  nn::save_checkpoint(cfg.hasm_checkpoint, segmenter.to_checkpoint());
  nn::save_checkpoint(cfg.hdrm_checkpoint, hdr.to_checkpoint());
  nn::save_checkpoint(cfg.shpe_checkpoint, pose.to_checkpoint());
}

std::string to_string(Route r) {
  switch (r) {
    case Route::kBaseline:
      return "shpe-only";
    case Route::kNoRemoval:
      return "wo-removal";
    case Route::kNoDeocclusion:
      return "wo-deocclusion";
    case Route::kFull:
      return "full";
  }
  return "?";
}

Route route_from_string(const std::string& s) {
  for (Route r : kAllRoutes) {
    if (to_string(r) == s) return r;
  }
  throw InvalidInput("unknown variant '" + s + "' (expected shpe-only, wo-removal, wo-deocclusion or full)");
}

MaskQuad segment_frame(const hasm::SegModel& model, const ImageGrid& image, double threshold) {
  return stage("hasm", [&] {
    const int s = model.config().input_size;
    const bool same = image.height() == s && image.width() == s;
    const auto pred = model.predict(same ? image : resize(image, s, s));
    if (same && threshold == 0.5) return pred.binary;
    MaskQuad soft = pred.soft;
    if (!same) {
      for (ImageGrid* m : {&soft.m_ra, &soft.m_rv, &soft.m_la, &soft.m_lv}) {
        *m = resize(*m, image.height(), image.width());
      }
    }
    return hasm::enforce_containment(soft, threshold);
  });
}

InferResult infer_with_masks(const Models& models, const PipelineConfig& cfg, const ImageGrid& image,
                             const MaskQuad& masks, Route route) {
  if (image.channels() != 3) throw StageError("input", "expected a 3-channel image");
  if (masks.m_ra.height() != image.height() || masks.m_ra.width() != image.width()) {
    throw StageError("input", "mask and image extents differ");
  }
  InferResult out;
  out.masks = masks;
  const int size = models.crop_size();
  for (HandSide side : {HandSide::kRight, HandSide::kLeft}) {
    const int k = static_cast<int>(side);
    HandResult hand;
    hand.side = side;
    try {
      hand.crop = maskops::crop_for_hand(image, masks, side, cfg.crop_expansion, size);
    } catch (const HandAbsent& e) {
      out.absent_reason[k] = e.what();
      continue;
    }
    hand.hdr_input = maskops::build_hdr_input(hand.crop.image, hand.crop.masks);
    if (route == Route::kBaseline) {
      hand.pose_input = hand.crop.image;
    } else {
      maskops::HdrInput in = hand.hdr_input;
      if (route == Route::kNoRemoval) {
        in.m_r = zeros_like(in.m_r);
        in.i_r = hand.crop.image;
      } else if (route == Route::kNoDeocclusion) {
        in.m_d = zeros_like(in.m_d);
        in.i_d = hand.crop.image;
      }
      hand.hdr_input = in;
      hand.pose_input = stage("hdrm", [&] { return models.hdr.infer(in); });
    }
    const auto maps = stage("shpe", [&] { return models.pose.predict(hand.pose_input); });
    hand.pose = shpe::decode_pose(maps, hand.crop.transform, models.pose.config().depth_scale_mm);
    out.hands[k] = std::move(hand);
  }
  return out;
}

InferResult infer_image(const Models& models, const PipelineConfig& cfg, const ImageGrid& image, Route route) {
  if (image.channels() != 3) throw StageError("input", "expected a 3-channel image");
  return infer_with_masks(models, cfg, image, segment_frame(models.segmenter, image, cfg.mask_threshold), route);
}

nlohmann::json result_to_json(const InferResult& r) {
  nlohmann::json hands = nlohmann::json::array();
  nlohmann::json absent = nlohmann::json::object();
  for (HandSide side : {HandSide::kRight, HandSide::kLeft}) {
    const auto& h = r.hand(side);
    if (!h) {
      absent[std::string(to_string(side))] = r.absent_reason[static_cast<int>(side)];
      continue;
    }
    nlohmann::json j = io::joints_to_json(h->pose.joints);
    j["side"] = std::string(to_string(side));
    j["confidence"] = h->pose.confidence;
    j["low_confidence"] = h->pose.low_confidence;
    hands.push_back(j);
  }
  return {{"hands", hands}, {"absent", absent}};
}

}  // namespace hdr::pipeline
