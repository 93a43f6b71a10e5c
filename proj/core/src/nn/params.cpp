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
#include "hdr/nn/params.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "hdr/core/error.hpp"
#include "hdr/nn/ops.hpp"

namespace hdr::nn {

static_assert(std::endian::native == std::endian::little, "checkpoint payload assumes little endian");

Tensor ParamStore::add(const std::string& name, Tensor t) {
  if (index_.count(name)) throw InvalidInput("duplicate parameter '" + name + "'");
  t.node()->requires_grad = true;
  index_[name] = items_.size();
  items_.emplace_back(name, t);
  return t;
}

Tensor ParamStore::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw InvalidInput("unknown parameter '" + name + "'");
  return items_[it->second].second;
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : items_) n += t.numel();
  return n;
}

void ParamStore::zero_grad() {
  for (auto& [name, t] : items_) t.zero_grad();
}

Tensor ParamStore::l2_sum() const {
  Tensor total;
  for (const auto& [name, t] : items_) {
    Tensor s = sum_squares(t);
    total = total.defined() ? nn::add(total, s) : s;
  }
  return total.defined() ? total : Tensor::zeros({1});
}

Tensor he_normal(const Shape& shape, int fan_in, Rng& rng) {
  const double std_dev = std::sqrt(2.0 / fan_in);
  std::vector<double> v(numel(shape));
  for (double& x : v) x = rng.normal() * std_dev;
  return Tensor::make(shape, std::move(v));
}

const NamedArray* Checkpoint::find(const std::string& name) const {
  for (const auto& a : arrays) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

void Checkpoint::put(std::string name, Shape shape, std::vector<double> data) {
  for (auto& a : arrays) {
    if (a.name == name) {
      a.shape = std::move(shape);
      a.data = std::move(data);
      return;
    }
  }
  arrays.push_back({std::move(name), std::move(shape), std::move(data)});
}

namespace {
constexpr char kMagic[8] = {'H', 'D', 'R', 'C', 'K', 'P', 'T', '1'};
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  nlohmann::json header;
  header["config"] = ckpt.config;
  header["arrays"] = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& a : ckpt.arrays) {
    if (numel(a.shape) != a.data.size()) throw ShapeMismatch("checkpoint array '" + a.name + "'");
    header["arrays"].push_back({{"name", a.name}, {"shape", a.shape}, {"offset", offset}});
    offset += a.data.size();
  }
  const std::string text = header.dump();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  const std::uint64_t len = text.size();
  os.write(kMagic, sizeof(kMagic));
  os.write(reinterpret_cast<const char*>(&len), sizeof(len));
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& a : ckpt.arrays) {
    os.write(reinterpret_cast<const char*>(a.data.data()),
             static_cast<std::streamsize>(a.data.size() * sizeof(double)));
  }
  if (!os) throw IoError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint " + path.string());
  char magic[8];
  std::uint64_t len = 0;
  is.read(magic, sizeof(magic));
  is.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError(path.string() + " is not a checkpoint");
  }
  std::string text(len, '\0');
  is.read(text.data(), static_cast<std::streamsize>(len));
  Checkpoint ckpt;
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt checkpoint header in " + path.string());
  }
  ckpt.config = header.at("config");
  for (const auto& entry : header.at("arrays")) {
    NamedArray a;
    a.name = entry.at("name").get<std::string>();
    a.shape = entry.at("shape").get<Shape>();
    a.data.resize(numel(a.shape));
    is.read(reinterpret_cast<char*>(a.data.data()),
            static_cast<std::streamsize>(a.data.size() * sizeof(double)));
    ckpt.arrays.push_back(std::move(a));
  }
  if (!is) throw IoError("truncated checkpoint " + path.string());
  return ckpt;
}

void export_params(const ParamStore& params, Checkpoint& ckpt, const std::string& prefix) {
  for (const auto& [name, t] : params.items()) {
    ckpt.put(prefix + name, t.shape(), std::vector<double>(t.data().begin(), t.data().end()));
  }
}

void import_params(ParamStore& params, const Checkpoint& ckpt, const std::string& prefix) {
  for (const auto& [name, t] : params.items()) {
    const NamedArray* a = ckpt.find(prefix + name);
    if (!a) throw IoError("checkpoint lacks parameter '" + prefix + name + "'");
    if (a->shape != t.shape()) {
      throw ShapeMismatch("checkpoint parameter '" + prefix + name + "' has shape " +
                          shape_string(a->shape) + ", model expects " + shape_string(t.shape()));
    }
    Tensor handle = t;
    std::copy(a->data.begin(), a->data.end(), handle.mutable_data().begin());
  }
}

Adam::Adam(ParamStore& params, AdamConfig config) : params_(&params), config_(config) {
  for (const auto& [name, t] : params.items()) {
    m_.emplace_back(t.numel(), 0.0);
    v_.emplace_back(t.numel(), 0.0);
  }
}

void Adam::step() {
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  std::size_t k = 0;
  for (const auto& [name, param] : params_->items()) {
    Tensor p = param;
    const auto g = p.grad();
    if (g.empty()) {
      ++k;
      continue;
    }
    auto w = p.mutable_data();
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
      w[i] -= config_.lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + config_.eps);
    }
    ++k;
  }
}

void Adam::save_state(Checkpoint& ckpt, const std::string& prefix) const {
  ckpt.config[prefix + "adam_step"] = t_;
  std::size_t k = 0;
  for (const auto& [name, t] : params_->items()) {
    ckpt.put(prefix + "adam.m/" + name, t.shape(), m_[k]);
    ckpt.put(prefix + "adam.v/" + name, t.shape(), v_[k]);
    ++k;
  }
}

void Adam::load_state(const Checkpoint& ckpt, const std::string& prefix) {
  t_ = ckpt.config.value(prefix + "adam_step", 0L);
  std::size_t k = 0;
  for (const auto& [name, t] : params_->items()) {
    const NamedArray* m = ckpt.find(prefix + "adam.m/" + name);
    const NamedArray* v = ckpt.find(prefix + "adam.v/" + name);
    if (!m || !v || m->data.size() != t.numel() || v->data.size() != t.numel()) {
      throw IoError("checkpoint lacks optimizer state for '" + name + "'");
    }
    m_[k] = m->data;
    v_[k] = v->data;
    ++k;
  }
}

}  // namespace hdr::nn
