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
#include <string>

#include <nlohmann/json.hpp>

#include "hdr/core/error.hpp"
#include "hdr/core/rng.hpp"
#include "hdr/hasm/model.hpp"
#include "hdr/hasm/trainer.hpp"
#include "hdr/hdrm/model.hpp"
#include "hdr/hdrm/trainer.hpp"
#include "hdr/shpe/model.hpp"
#include "hdr/shpe/trainer.hpp"
#include "hdr/synth/generator.hpp"

namespace hdr::pipeline {

/// Raised by a pipeline stage; what() starts with the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct DeviceHints {
  int threads = 1;
  bool accelerator = false;
};

/// Everything the CLI needs: checkpoint locations, inference knobs and the
/// model/training/generator settings used by the training subcommands.
struct PipelineConfig {
  std::filesystem::path hasm_checkpoint = "hasm.ckpt";
  std::filesystem::path hdrm_checkpoint = "hdrm.ckpt";
  std::filesystem::path shpe_checkpoint = "shpe.ckpt";
  double crop_expansion = 1.3;
  double mask_threshold = 0.5;
  RngSeed seed{0};
  bool fast = false;
  DeviceHints device;

  hasm::SegModelConfig hasm_model;
  hdrm::HdrNetConfig hdrm_model;
  shpe::PoseNetConfig shpe_model;
  hasm::SegTrainConfig hasm_train;
  hdrm::HdrTrainConfig hdrm_train;
  shpe::PoseTrainConfig shpe_train;
  synth::SynthConfig synth;

  /// 64x64 models and generator with shorter schedules.
  static PipelineConfig fast_mode();

  /// Value checks only; checkpoints are checked when models load.
  void validate() const;
  nlohmann::json to_json() const;
  /// Keys missing from j keep the values of base. Relative checkpoint paths
  /// resolve against base_dir.
  static PipelineConfig from_json(const nlohmann::json& j, const PipelineConfig& base,
                                  const std::filesystem::path& base_dir = {});
  /// Reads a JSON file. "fast": true selects fast_mode() as the base.
  static PipelineConfig load(const std::filesystem::path& path);
};

}  // namespace hdr::pipeline
