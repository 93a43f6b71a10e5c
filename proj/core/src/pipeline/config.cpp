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
#include "hdr/pipeline/config.hpp"

#include "hdr/core/io.hpp"

namespace hdr::pipeline {

PipelineConfig PipelineConfig::fast_mode() {
  PipelineConfig c;
  c.fast = true;
  c.hasm_model = hasm::SegModelConfig::fast();
  // Fast frames are 64 px; segmenting them upsampled to 128 keeps the
  // quarter-resolution heads from losing fingers.
  c.hasm_model.input_size = 128;
  c.hdrm_model = hdrm::HdrNetConfig::fast();
  c.shpe_model = shpe::PoseNetConfig::fast();
  c.synth = synth::SynthConfig::fast();
  c.hasm_train.steps = 3000;
  c.hasm_train.batch_size = 8;
  c.hdrm_train.stage1_steps = 1200;
  c.hdrm_train.stage2_steps = 300;
  c.hdrm_train.batch_size = 8;
  c.hdrm_train.discriminator_widths = {16, 32, 32};
  c.hdrm_train.feature_widths = {8, 16, 32};
  c.shpe_train.steps = 3000;
  c.shpe_train.batch_size = 8;
  return c;
}

void PipelineConfig::validate() const {
  if (!(crop_expansion >= 1.0)) throw InvalidInput("config: crop_expansion must be >= 1");
  if (!(mask_threshold > 0.0 && mask_threshold < 1.0)) throw InvalidInput("config: mask_threshold must lie in (0, 1)");
  if (device.threads < 1) throw InvalidInput("config: device.threads must be >= 1");
  hasm_model.validate();
  hdrm_model.validate();
  shpe_model.validate();
  synth.validate();
  if (hdrm_model.input_size != shpe_model.input_size) {
    throw InvalidInput("config: hdrm and shpe input sizes differ");
  }
}

nlohmann::json PipelineConfig::to_json() const {
  return {
      {"checkpoints",
       {{"hasm", hasm_checkpoint.string()}, {"hdrm", hdrm_checkpoint.string()}, {"shpe", shpe_checkpoint.string()}}},
      {"crop_expansion", crop_expansion},
      {"mask_threshold", mask_threshold},
      {"seed", seed.value},
      {"fast", fast},
      {"device", {{"threads", device.threads}, {"accelerator", device.accelerator}}},
      {"models", {{"hasm", hasm_model.to_json()}, {"hdrm", hdrm_model.to_json()}, {"shpe", shpe_model.to_json()}}},
      {"train", {{"hasm", hasm_train.to_json()}, {"hdrm", hdrm_train.to_json()}, {"shpe", shpe_train.to_json()}}},
      {"synth", synth.to_json()},
  };
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j, const PipelineConfig& base,
                                         const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw InvalidInput("config: expected a JSON object");
  nlohmann::json merged = base.to_json();
  merged.merge_patch(j);
  try {
    PipelineConfig c;
    auto path = [&](const char* key) {
      std::filesystem::path p = merged.at("checkpoints").at(key).get<std::string>();
      return p.is_relative() && !base_dir.empty() && j.contains("checkpoints") && j["checkpoints"].contains(key)
                 ? base_dir / p
                 : p;
    };
    c.hasm_checkpoint = path("hasm");
    c.hdrm_checkpoint = path("hdrm");
    c.shpe_checkpoint = path("shpe");
    c.crop_expansion = merged.at("crop_expansion").get<double>();
    c.mask_threshold = merged.at("mask_threshold").get<double>();
    c.seed = RngSeed{merged.at("seed").get<std::uint64_t>()};
    c.fast = merged.at("fast").get<bool>();
    c.device.threads = merged.at("device").at("threads").get<int>();
    c.device.accelerator = merged.at("device").at("accelerator").get<bool>();
    c.hasm_model = hasm::SegModelConfig::from_json(merged.at("models").at("hasm"));
    c.hdrm_model = hdrm::HdrNetConfig::from_json(merged.at("models").at("hdrm"));
    c.shpe_model = shpe::PoseNetConfig::from_json(merged.at("models").at("shpe"));
    c.hasm_train = hasm::SegTrainConfig::from_json(merged.at("train").at("hasm"));
    c.hdrm_train = hdrm::HdrTrainConfig::from_json(merged.at("train").at("hdrm"));
    c.shpe_train = shpe::PoseTrainConfig::from_json(merged.at("train").at("shpe"));
    c.synth = synth::SynthConfig::from_json(merged.at("synth"));
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("config not found: " + path.string());
  const nlohmann::json j = io::read_json(path);
  const bool fast = j.is_object() && j.value("fast", false);
  return from_json(j, fast ? fast_mode() : PipelineConfig{}, path.parent_path());
}

}  // namespace hdr::pipeline
