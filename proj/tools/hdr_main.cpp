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
// Command line front end: data generation, training, inference, evaluation
// and visualization.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hdr/core/error.hpp"
#include "hdr/core/io.hpp"
#include "hdr/eval/metrics.hpp"
#include "hdr/pipeline/config.hpp"
#include "hdr/pipeline/experiment.hpp"
#include "hdr/pipeline/infer.hpp"
#include "hdr/pipeline/timing.hpp"
#include "hdr/pipeline/viz.hpp"
#include "hdr/synth/generator.hpp"
#include "hdr/synth/render.hpp"

namespace fs = std::filesystem;
using namespace hdr;

namespace {

constexpr int kUserError = 1;
constexpr int kInternalError = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool fast = false;
};

pipeline::PipelineConfig resolve_config(const Globals& g, bool required) {
  if (g.config.empty() && required) throw UsageError("this subcommand needs --config");
  pipeline::PipelineConfig cfg = g.config.empty() ? (g.fast ? pipeline::PipelineConfig::fast_mode() : pipeline::PipelineConfig{})
                                                  : pipeline::PipelineConfig::load(g.config);
  if (g.seed) cfg.seed = RngSeed{*g.seed};
  return cfg;
}

fs::path require_out(const Globals& g) {
  if (g.out.empty()) throw UsageError("this subcommand needs --out");
  return g.out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  os << text;
}

std::ofstream open_log(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

std::vector<synth::SynthSample> load_data(const std::string& dir) {
  if (dir.empty()) throw UsageError("--data is required");
  if (!fs::exists(fs::path(dir) / "manifest.json")) throw IoError("no manifest.json in " + dir);
  auto samples = synth::read_dataset(dir);
  if (samples.empty()) throw InvalidInput("dataset " + dir + " is empty");
  return samples;
}

/// Records the trained checkpoint in <out>/config.json so later subcommands
/// can pick it up with --config.
void update_run_config(const fs::path& out, pipeline::PipelineConfig cfg, const std::string& module) {
  const fs::path path = out / "config.json";
  nlohmann::json j = fs::exists(path) ? io::read_json(path) : cfg.to_json();
  nlohmann::json fresh = cfg.to_json();
  j["fast"] = cfg.fast;
  j["seed"] = cfg.seed.value;
  j["models"][module] = fresh["models"][module];
  j["train"][module] = fresh["train"][module];
  j["checkpoints"][module] = module + ".ckpt";
  io::write_json(path, j);
}

int cmd_synth(const Globals& g, long n, double mix, const std::string& backgrounds) {
  const auto cfg = resolve_config(g, false);
  if (n <= 0) throw UsageError("--n must be positive");
  std::vector<ImageGrid> bgs;
  if (!backgrounds.empty()) bgs = synth::load_backgrounds(backgrounds);
  const auto manifest =
      synth::generate_dataset(n, mix, cfg.seed, cfg.synth, require_out(g), bgs.empty() ? nullptr : &bgs);
  std::cout << "wrote " << manifest.at("n").get<long>() << " samples to " << g.out << "\n";
  return 0;
}

int cmd_train(const Globals& g, const std::string& module, const std::string& data_dir, long steps) {
  auto cfg = resolve_config(g, false);
  const fs::path out = require_out(g);
  fs::create_directories(out);
  const auto samples = load_data(data_dir);
  auto log = open_log(out / (module + "_log.csv"));
  const fs::path ckpt = out / (module + ".ckpt");
  if (module == "hasm") {
    if (steps > 0) cfg.hasm_train.steps = steps;
    hasm::SegModel model(cfg.hasm_model, derive_seed(cfg.seed, 1));
    hasm::SegTrainer trainer(model, cfg.hasm_train, derive_seed(cfg.seed, 11));
    trainer.run(pipeline::segmentation_examples(samples, cfg.hasm_model.input_size), &log);
    nn::save_checkpoint(ckpt, model.to_checkpoint());
  } else if (module == "hdrm") {
    if (steps > 0) cfg.hdrm_train.stage1_steps = steps;
    const int size = cfg.hdrm_model.input_size;
    const auto stage1 = pipeline::hdr_examples(samples, size, cfg.crop_expansion);
    std::optional<std::vector<hdrm::HdrExample>> stage2;
    if (!g.config.empty() && fs::exists(cfg.hasm_checkpoint)) {
      const auto seg = hasm::SegModel::from_checkpoint(nn::load_checkpoint(cfg.hasm_checkpoint));
      stage2 = pipeline::hdr_examples(samples, size, cfg.crop_expansion, &seg, cfg.mask_threshold);
    }
    hdrm::HdrNet net(cfg.hdrm_model, derive_seed(cfg.seed, 2));
    hdrm::HdrTrainer trainer(net, cfg.hdrm_train, derive_seed(cfg.seed, 12));
    trainer.run(stage1, stage2 && !stage2->empty() ? &*stage2 : nullptr, &log);
    nn::save_checkpoint(ckpt, net.to_checkpoint());
  } else {
    if (steps > 0) cfg.shpe_train.steps = steps;
    shpe::PoseNet net(cfg.shpe_model, derive_seed(cfg.seed, 3));
    shpe::PoseTrainer trainer(net, cfg.shpe_train, derive_seed(cfg.seed, 13));
    trainer.run(pipeline::pose_examples(samples, cfg.shpe_model.input_size, cfg.crop_expansion), &log);
    nn::save_checkpoint(ckpt, net.to_checkpoint());
  }
  update_run_config(out, cfg, module);
  std::cout << "wrote " << ckpt.string() << "\n";
  return 0;
}

int cmd_infer(const Globals& g, const std::string& image_path, const std::string& variant) {
  const auto cfg = resolve_config(g, true);
  if (image_path.empty()) throw UsageError("--image is required");
  const auto models = pipeline::Models::load(cfg);
  const ImageGrid image = io::read_png(image_path, 3);
  const auto result = pipeline::infer_image(models, cfg, image, pipeline::route_from_string(variant));
  const std::string text = pipeline::result_to_json(result).dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
  } else {
    write_text(g.out, text);
  }
  return 0;
}

int cmd_eval(const Globals& g, const std::string& data_dir, const std::string& variant) {
  const auto cfg = resolve_config(g, true);
  const fs::path out = require_out(g);
  const auto models = pipeline::Models::load(cfg);
  const auto samples = load_data(data_dir);
  const auto route = pipeline::route_from_string(variant);
  const auto records = pipeline::evaluate_routes(models, cfg, samples, {route}).at(route);

  std::ostringstream rows;
  rows << "id,subset,mpjpe_mm,epe_px,right_present,left_present\n";
  for (const auto& r : records) {
    const auto m = r.mpjpe();
    const auto e = r.epe2d();
    const char* subset = r.tags.inter ? "Inter" : r.tags.interacting ? "IH" : r.tags.single ? "SH" : "none";
    rows << r.id << ',' << subset << ',' << (m ? std::to_string(*m) : "") << ',' << (e ? std::to_string(*e) : "") << ','
         << (r.pred[0] ? 1 : 0) << ',' << (r.pred[1] ? 1 : 0) << '\n';
  }
  write_text(out / "per_sample.csv", rows.str());
  const auto report = eval::run_ablation({variant}, {cfg.seed}, [&](const std::string&, RngSeed) { return records; });
  write_text(out / "summary.csv", report.to_csv());
  write_text(out / "summary.md", report.to_markdown());
  std::cout << report.to_markdown();
  return 0;
}

int cmd_ablate(const Globals& g, const std::string& data_dir, long train_n, long test_n, int seeds) {
  const fs::path out = require_out(g);
  eval::AblationReport report;
  if (train_n > 0) {
    const auto cfg = resolve_config(g, false);
    pipeline::ExperimentConfig exp;
    exp.train_samples = train_n;
    exp.test_samples = test_n;
    exp.data_seed = cfg.seed;
    exp.seeds.clear();
    for (int s = 0; s < seeds; ++s) exp.seeds.push_back(derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(s)));
    report = pipeline::run_experiment(cfg, exp, &std::cerr);
  } else {
    const auto cfg = resolve_config(g, true);
    const auto models = pipeline::Models::load(cfg);
    const auto samples = load_data(data_dir);
    const std::vector<pipeline::Route> routes(pipeline::kAllRoutes.begin(), pipeline::kAllRoutes.end());
    const auto records = pipeline::evaluate_routes(models, cfg, samples, routes);
    std::vector<std::string> names;
    for (auto r : routes) names.push_back(pipeline::to_string(r));
    report = eval::run_ablation(names, {cfg.seed}, [&](const std::string& v, RngSeed) {
      return records.at(pipeline::route_from_string(v));
    });
  }
  write_text(out / "ablation.csv", report.to_csv());
  write_text(out / "ablation.md", report.to_markdown());
  std::cout << report.to_markdown();
  return 0;
}

ImageGrid pick_image(const std::string& data_dir, const std::string& id, const std::string& image_path) {
  if (!image_path.empty()) return io::read_png(image_path, 3);
  if (data_dir.empty() || id.empty()) throw UsageError("give --image, or --data with --id");
  return synth::read_sample(data_dir, id).image;
}

int cmd_viz(const Globals& g, const std::string& data_dir, const std::string& id, const std::string& image_path) {
  const auto cfg = resolve_config(g, true);
  const fs::path out = require_out(g);
  const auto models = pipeline::Models::load(cfg);
  const ImageGrid image = pick_image(data_dir, id, image_path);
  const auto result = pipeline::infer_image(models, cfg, image);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  io::write_png(out, pipeline::render_panel(image, result));
  std::cout << "wrote " << out.string() << "\n";
  return 0;
}

int cmd_timing(const Globals& g, const std::string& data_dir, int frames) {
  const auto cfg = resolve_config(g, true);
  const auto models = pipeline::Models::load(cfg);
  std::vector<ImageGrid> images;
  for (auto& s : load_data(data_dir)) images.push_back(std::move(s.image));
  const auto report = pipeline::timing_probe(models, cfg, images, frames);
  if (!g.out.empty()) write_text(g.out, report.to_markdown());
  std::cout << report.to_markdown();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hand de-occlusion and removal pipeline"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "pipeline configuration (JSON)");
  app.add_option("--seed", g.seed, "overrides the configured seed");
  app.add_option("--out", g.out, "output file or directory");
  app.add_flag("--fast", g.fast, "64x64 models and data when no --config is given");

  std::function<int()> run;

  long n = 0;
  double mix = 0.5;
  std::string backgrounds, data, image, id, variant = "full";
  long steps = 0, train_n = 0, test_n = 200;
  int seeds = 3, frames = pipeline::kMinTimedFrames;

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset");
  synth_cmd->add_option("--n", n, "number of samples")->required();
  synth_cmd->add_option("--mix", mix, "fraction of copy-paste samples")->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--backgrounds", backgrounds, "directory of PNG backgrounds");
  synth_cmd->callback([&] { run = [&] { return cmd_synth(g, n, mix, backgrounds); }; });

  for (const std::string module : {"hasm", "hdrm", "shpe"}) {
    auto* cmd = app.add_subcommand("train-" + module, "train the " + module + " network");
    cmd->add_option("--data", data, "dataset directory")->required();
    cmd->add_option("--steps", steps, "override the configured number of steps");
    cmd->callback([&, module] { run = [&, module] { return cmd_train(g, module, data, steps); }; });
  }

  auto* infer_cmd = app.add_subcommand("infer", "estimate hand poses in one image");
  infer_cmd->add_option("--image", image, "input PNG")->required();
  infer_cmd->add_option("--variant", variant, "shpe-only | wo-removal | wo-deocclusion | full");
  infer_cmd->callback([&] { run = [&] { return cmd_infer(g, image, variant); }; });

  auto* eval_cmd = app.add_subcommand("eval", "evaluate on a generated dataset");
  eval_cmd->add_option("--data", data, "dataset directory")->required();
  eval_cmd->add_option("--variant", variant, "shpe-only | wo-removal | wo-deocclusion | full");
  eval_cmd->callback([&] { run = [&] { return cmd_eval(g, data, variant); }; });

  auto* ablate_cmd = app.add_subcommand("ablate", "compare the four inference routes");
  ablate_cmd->add_option("--data", data, "dataset directory (with trained checkpoints)");
  ablate_cmd->add_option("--train-n", train_n, "train fresh models on this many generated samples");
  ablate_cmd->add_option("--test-n", test_n, "occluded held-out samples (with --train-n)");
  ablate_cmd->add_option("--seeds", seeds, "training seeds (with --train-n)")->check(CLI::PositiveNumber);
  ablate_cmd->callback([&] { run = [&] { return cmd_ablate(g, data, train_n, test_n, seeds); }; });

  auto* viz_cmd = app.add_subcommand("viz", "write a qualitative panel");
  viz_cmd->add_option("--data", data, "dataset directory");
  viz_cmd->add_option("--id", id, "sample id within --data");
  viz_cmd->add_option("--image", image, "input PNG instead of a dataset sample");
  viz_cmd->callback([&] { run = [&] { return cmd_viz(g, data, id, image); }; });

  auto* timing_cmd = app.add_subcommand("timing", "per-stage timing profile");
  timing_cmd->add_option("--data", data, "dataset directory")->required();
  timing_cmd->add_option("--frames", frames, "minimum timed frames")->check(CLI::PositiveNumber);
  timing_cmd->callback([&] { run = [&] { return cmd_timing(g, data, frames); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUserError;
  }

  try {
    return run();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kUserError;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const pipeline::StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}
