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
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hdr/core/rng.hpp"
#include "hdr/nn/tensor.hpp"

namespace hdr::nn {

/// Ordered collection of named trainable tensors.
class ParamStore {
 public:
  Tensor add(const std::string& name, Tensor t);
  Tensor get(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  const std::vector<std::pair<std::string, Tensor>>& items() const { return items_; }
  std::size_t scalar_count() const;
  void zero_grad();
  /// Sum of squared parameter values, differentiable.
  Tensor l2_sum() const;

 private:
  std::vector<std::pair<std::string, Tensor>> items_;
  std::map<std::string, std::size_t> index_;
};

/// He-normal initialized weight, std = sqrt(2 / fan_in).
Tensor he_normal(const Shape& shape, int fan_in, Rng& rng);

struct NamedArray {
  std::string name;
  Shape shape;
  std::vector<double> data;
};

/// Single-file archive: JSON config plus named double arrays.
///
/// Layout: 8-byte magic "HDRCKPT1", u64 header length, UTF-8 JSON header
/// {"config": ..., "arrays": [{"name", "shape", "offset"}...]}, then the raw
/// little-endian float64 payload.
struct Checkpoint {
  nlohmann::json config = nlohmann::json::object();
  std::vector<NamedArray> arrays;

  const NamedArray* find(const std::string& name) const;
  void put(std::string name, Shape shape, std::vector<double> data);
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

void export_params(const ParamStore& params, Checkpoint& ckpt, const std::string& prefix = "");
/// Copies values into existing parameters; shapes must match.
void import_params(ParamStore& params, const Checkpoint& ckpt, const std::string& prefix = "");

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam(ParamStore& params, AdamConfig config);

  void step();
  void set_lr(double lr) { config_.lr = lr; }
  double lr() const { return config_.lr; }
  long steps() const { return t_; }

  void save_state(Checkpoint& ckpt, const std::string& prefix) const;
  void load_state(const Checkpoint& ckpt, const std::string& prefix);

 private:
  ParamStore* params_;
  AdamConfig config_;
  long t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

}  // namespace hdr::nn
