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

#include <vector>

#include "hdr/core/image.hpp"
#include "hdr/core/rng.hpp"
#include "hdr/nn/tensor.hpp"

namespace hdr::nn {

/// Stacks same-shape grids into a [N,C,H,W] tensor.
Tensor stack_grids(const std::vector<const ImageGrid*>& grids, bool requires_grad = false);
Tensor grid_tensor(const ImageGrid& g);

/// Item `index` of a [N,C,H,W] tensor as a grid, clamped to [0,1].
ImageGrid to_grid(const Tensor& t, int index = 0);

/// Minibatch of `batch` indices in [0, n) for a training step, drawn from a
/// generator seeded by (seed, step) so a resumed run sees the same batches.
std::vector<int> batch_indices(RngSeed seed, long step, int n, int batch);

}  // namespace hdr::nn
