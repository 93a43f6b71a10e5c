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

#include "hdr/nn/tensor.hpp"

namespace hdr::nn {

// Elementwise, identical shapes.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
Tensor add_scalar(const Tensor& a, double s);

Tensor relu(const Tensor& x);
Tensor leaky_relu(const Tensor& x, double slope);
Tensor sigmoid(const Tensor& x);
Tensor gelu(const Tensor& x);
Tensor softplus(const Tensor& x);

Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
Tensor sum_squares(const Tensor& x);

Tensor reshape(const Tensor& x, Shape shape);
/// General axis permutation (up to rank 4).
Tensor permute(const Tensor& x, const std::vector<int>& perm);

/// x: [N,Ci,H,W], w: [Co,Ci,k,k], b: [Co] or undefined.
Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad);

/// x: [N,C,H,W], m: [N,1,H,W]; broadcasts m over channels.
Tensor mul_pixelwise(const Tensor& x, const Tensor& m);
/// x: [N,C,H,W], b: [C].
Tensor add_channel_bias(const Tensor& x, const Tensor& b);
/// out = m * a + (1 - m) * b per pixel, with m: [N,1,H,W] constant. Pixels
/// where m is exactly 0 or 1 copy the selected input bit-exactly.
Tensor blend(const Tensor& a, const Tensor& b, const Tensor& m);

Tensor concat_channels(const std::vector<Tensor>& xs);
Tensor slice_channels(const Tensor& x, int begin, int end);

Tensor upsample_nearest(const Tensor& x, int factor);
/// Half-pixel-centered bilinear resize of a [N,C,H,W] tensor.
Tensor upsample_bilinear(const Tensor& x, int out_h, int out_w);
Tensor avg_pool(const Tensor& x, int k);

/// x: [..., K], w: [M, K], b: [M] or undefined.
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);
/// a: [B,M,K]; b: [B,K,N] (or [B,N,K] when transpose_b).
Tensor bmm(const Tensor& a, const Tensor& b, bool transpose_b = false);
Tensor softmax_lastdim(const Tensor& x);
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps = 1e-5);

// Losses (scalar outputs).

/// Mean binary cross entropy with predictions clamped to [eps, 1 - eps].
/// Targets must be 0 or 1.
Tensor bce_mean(const Tensor& p, const Tensor& target, double eps = 1e-7);
Tensor l1_mean(const Tensor& a, const Tensor& b);
/// sum(w * (a - b)^2) / sum(w); zero when the weights vanish.
Tensor weighted_mse(const Tensor& a, const Tensor& b, const std::vector<double>& w);

}  // namespace hdr::nn
