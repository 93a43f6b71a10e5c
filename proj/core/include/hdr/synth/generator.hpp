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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hdr/core/image.hpp"
#include "hdr/core/rng.hpp"
#include "hdr/core/types.hpp"
#include "hdr/synth/hand.hpp"
#include "hdr/synth/render.hpp"

namespace hdr::synth {

enum class Variant { kSyn, kRender };
std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct Range {
  double lo, hi;
};

struct SynthConfig {
  int image_size = 256;
  double focal_scale = 1.3;
  Range root_depth_mm{380.0, 460.0};
  /// Fraction of the right amodal mask covered by the left amodal mask.
  Range overlap_band{0.05, 0.9};
  Range paste_scale{0.8, 1.2};
  double paste_rotation_deg = 45.0;
  double color_jitter = 0.1;
  double color_match = 0.15;
  int max_retries = 50;

  static SynthConfig fast();
  void validate() const;
  nlohmann::json to_json() const;
  static SynthConfig from_json(const nlohmann::json& j);
};

struct SynthSample {
  ImageGrid image;
  MaskQuad masks;
  ImageGrid target_right;  ///< the scene with only the right hand, fully visible
  ImageGrid target_left;
  JointSet joints_right, joints_left;  ///< 2D pixels, 3D root-relative mm
  nlohmann::json meta = nlohmann::json::object();

  const ImageGrid& target(HandSide s) const { return s == HandSide::kRight ? target_right : target_left; }
  const JointSet& joints(HandSide s) const { return s == HandSide::kRight ? joints_right : joints_left; }
};

/// One hand rendered alone over its own background.
struct HandRecord {
  ImageGrid image, mask, clean_plate;
  JointSet joints;
  HandSide side = HandSide::kRight;
  Eigen::Vector3d mean_color = Eigen::Vector3d::Zero();  ///< over the mask
};

HandRecord render_record(const ProceduralHand& hand, const Camera& camera, const ImageGrid& background);

/// Similarity placement of the pasted hand: its mask centroid lands at
/// center, scaled and rotated about it, colors scaled per channel.
struct PasteParams {
  double scale = 1.0;
  double rotation_rad = 0.0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  Eigen::Vector3d jitter = Eigen::Vector3d::Zero();  ///< relative, per channel
};

/// Pastes the left record over the right one.
SynthSample paste_hand(const HandRecord& right, const HandRecord& left, const PasteParams& params);

/// Copy-paste sample with random placement. Returns nothing when no
/// placement within the overlap band is found in config.max_retries tries.
std::optional<SynthSample> synth_copy_paste(const HandRecord& right, const HandRecord& left, const SynthConfig& config,
                                            RngSeed seed);

struct RenderScene {
  Camera camera;
  std::optional<ProceduralHand> right, left;
  ImageGrid background;
};

/// Depth-ordered composite of the hands in the scene (the nearer hand wins a
/// pixel, the right hand on exact ties).
SynthSample synth_render(const RenderScene& scene);

/// Random interacting render scene, or nothing when no non-interpenetrating
/// placement within the overlap band is found.
std::optional<RenderScene> sample_render_scene(const SynthConfig& config, Rng& rng,
                                               const std::vector<ImageGrid>* backgrounds = nullptr);

/// Variant of sample i under the stratified mix assignment.
Variant variant_for_index(long i, double mix);

/// Generates sample i, retrying with derived seeds until a valid one exists.
SynthSample generate_sample(long index, Variant variant, RngSeed seed, const SynthConfig& config,
                            const std::vector<ImageGrid>* backgrounds = nullptr);

/// MaskQuad invariants, target consistency for both sides and joints inside
/// the amodal masks dilated by 3 px. Fills reason on failure.
bool check_sample(const SynthSample& s, std::string* reason = nullptr);

std::string sample_id(long index);

/// Writes n samples and manifest.json under out_dir; returns the manifest.
nlohmann::json generate_dataset(long n, double mix, RngSeed seed, const SynthConfig& config,
                                 const std::filesystem::path& out_dir,
                                 const std::vector<ImageGrid>* backgrounds = nullptr);

void write_sample(const std::filesystem::path& out_dir, const std::string& id, const SynthSample& s);
SynthSample read_sample(const std::filesystem::path& dir, const std::string& id);
/// Reads every sample listed in the manifest, in manifest order.
std::vector<SynthSample> read_dataset(const std::filesystem::path& dir);

}  // namespace hdr::synth
