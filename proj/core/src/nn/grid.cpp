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
#include "hdr/nn/grid.hpp"

#include <algorithm>

#include "hdr/core/error.hpp"

namespace hdr::nn {

Tensor stack_grids(const std::vector<const ImageGrid*>& grids, bool requires_grad) {
  if (grids.empty()) throw InvalidInput("stack_grids: empty batch");
  const ImageGrid& first = *grids.front();
  std::vector<double> v;
  v.reserve(first.size() * grids.size());
  for (const ImageGrid* g : grids) {
    if (!g->same_shape(first)) throw ShapeMismatch("stack_grids: grids differ in shape");
    v.insert(v.end(), g->values().begin(), g->values().end());
  }
  return Tensor::make({static_cast<int>(grids.size()), first.channels(), first.height(), first.width()},
                      std::move(v), requires_grad);
}

Tensor grid_tensor(const ImageGrid& g) { return stack_grids({&g}); }

ImageGrid to_grid(const Tensor& t, int index) {
  if (t.ndim() != 4) throw ShapeMismatch("to_grid: expected [N,C,H,W], got " + shape_string(t.shape()));
  if (index < 0 || index >= t.dim(0)) throw InvalidInput("to_grid: index out of range");
  const int c = t.dim(1), h = t.dim(2), w = t.dim(3);
  const std::size_t plane = static_cast<std::size_t>(c) * h * w;
  std::vector<float> v(plane);
  const double* src = t.data().data() + plane * index;
  for (std::size_t i = 0; i < plane; ++i) v[i] = static_cast<float>(std::clamp(src[i], 0.0, 1.0));
  return ImageGrid(h, w, c, std::move(v));
}

std::vector<int> batch_indices(RngSeed seed, long step, int n, int batch) {
  if (n <= 0 || batch <= 0) throw InvalidInput("batch_indices: empty dataset or batch");
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(step)));
  std::vector<int> out(batch);
  for (int& i : out) i = rng.uniform_int(0, n - 1);
  return out;
}

}  // namespace hdr::nn
