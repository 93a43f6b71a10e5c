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
#include "hdr/nn/tensor.hpp"

#include <algorithm>
#include <unordered_set>

#include "hdr/core/error.hpp"

namespace hdr::nn {
namespace {

thread_local bool g_grad_enabled = true;

}  // namespace

std::size_t numel(const Shape& shape) {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

std::vector<double>& Node::ensure_grad() {
  if (grad.size() != value.size()) grad.assign(value.size(), 0.0);
  return grad;
}

Tensor Tensor::make(Shape shape, std::vector<double> value, bool requires_grad) {
  if (nn::numel(shape) != value.size()) {
    throw ShapeMismatch("Tensor::make: " + std::to_string(value.size()) + " values for shape " +
                        shape_string(shape));
  }
  auto n = std::make_shared<Node>();
  n->shape = std::move(shape);
  n->value = std::move(value);
  n->requires_grad = requires_grad;
  return Tensor(std::move(n));
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return full(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::full(Shape shape, double v, bool requires_grad) {
  const std::size_t n = nn::numel(shape);
  return make(std::move(shape), std::vector<double>(n, v), requires_grad);
}

int Tensor::dim(int i) const {
  const int r = ndim();
  if (i < 0) i += r;
  if (i < 0 || i >= r) throw ShapeMismatch("Tensor::dim: axis out of range");
  return node_->shape[i];
}

void Tensor::zero_grad() {
  if (node_) std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

double Tensor::item() const {
  if (numel() != 1) throw ShapeMismatch("Tensor::item on " + shape_string(shape()));
  return node_->value[0];
}

Tensor Tensor::detach() const { return make(node_->shape, node_->value, false); }

namespace {

Tensor build(Shape shape, std::vector<double> value, const Tensor* parents, std::size_t count,
             BackwardFn fn) {
  bool needs = false;
  if (g_grad_enabled) {
    for (std::size_t i = 0; i < count; ++i) needs = needs || parents[i].requires_grad();
  }
  Tensor out = Tensor::make(std::move(shape), std::move(value), needs);
  if (needs) {
    Node* n = out.node();
    n->parents.reserve(count);
    for (std::size_t i = 0; i < count; ++i) n->parents.push_back(parents[i].node_ptr());
    n->backward = std::move(fn);
  }
  return out;
}

}  // namespace

Tensor make_result(Shape shape, std::vector<double> value, std::initializer_list<Tensor> parents,
                   BackwardFn fn) {
  return build(std::move(shape), std::move(value), parents.begin(), parents.size(), std::move(fn));
}

Tensor make_result(Shape shape, std::vector<double> value, const std::vector<Tensor>& parents,
                   BackwardFn fn) {
  return build(std::move(shape), std::move(value), parents.data(), parents.size(), std::move(fn));
}

void backward(const Tensor& loss) {
  if (!loss.defined() || loss.numel() != 1) throw ShapeMismatch("backward: loss must be a scalar");
  if (!loss.requires_grad()) return;

  // Iterative post-order DFS gives a topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack{{loss.node(), 0}};
  seen.insert(loss.node());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* p = node->parents[next++].get();
      if (p->requires_grad && seen.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  loss.node()->ensure_grad()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backward) {
      n->ensure_grad();
      n->backward(*n);
    }
  }
  for (Node* n : order) {
    if (n->backward) {
      n->backward = nullptr;
      n->parents.clear();
    }
  }
}

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

}  // namespace hdr::nn
