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

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hdr::nn {

using Shape = std::vector<int>;

std::size_t numel(const Shape& shape);
std::string shape_string(const Shape& shape);

struct Node;
using BackwardFn = std::function<void(Node&)>;

/// Graph node: value, accumulated gradient and the closure that pushes this
/// node's gradient into its parents.
struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  BackwardFn backward;

  std::vector<double>& ensure_grad();
};

/// Reference-semantics handle to a graph node. Copies share storage, which is
/// what parameter tensors rely on: layers and the optimizer see the same node.
class Tensor {
 public:
  Tensor() = default;

  static Tensor make(Shape shape, std::vector<double> value, bool requires_grad = false);
  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double v, bool requires_grad = false);

  bool defined() const { return static_cast<bool>(node_); }
  const Shape& shape() const { return node_->shape; }
  int dim(int i) const;
  int ndim() const { return static_cast<int>(node_->shape.size()); }
  std::size_t numel() const { return node_->value.size(); }

  std::span<const double> data() const { return node_->value; }
  /// Direct write access; only for leaves (parameters, inputs).
  std::span<double> mutable_data() { return node_->value; }
  std::span<const double> grad() const { return node_->grad; }
  std::span<double> mutable_grad() { return node_->ensure_grad(); }
  void zero_grad();

  bool requires_grad() const { return node_ && node_->requires_grad; }
  double item() const;
  /// Same values, no graph history.
  Tensor detach() const;

  Node* node() const { return node_.get(); }
  const std::shared_ptr<Node>& node_ptr() const { return node_; }

 private:
  explicit Tensor(std::shared_ptr<Node> n) : node_(std::move(n)) {}
  friend Tensor make_result(Shape, std::vector<double>, std::initializer_list<Tensor>, BackwardFn);
  friend Tensor make_result(Shape, std::vector<double>, const std::vector<Tensor>&, BackwardFn);

  std::shared_ptr<Node> node_;
};

/// Builds an op output. History is recorded only when gradients are enabled
/// and at least one parent requires them.
Tensor make_result(Shape shape, std::vector<double> value, std::initializer_list<Tensor> parents,
                   BackwardFn fn);
Tensor make_result(Shape shape, std::vector<double> value, const std::vector<Tensor>& parents,
                   BackwardFn fn);

/// Reverse-mode sweep from a scalar. Interior nodes drop their closures
/// afterwards so saved activations are released.
void backward(const Tensor& loss);

bool grad_enabled();

class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

}  // namespace hdr::nn
