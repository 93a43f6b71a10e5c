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
#include "hdr/hdrm/partial_conv.hpp"

#include "hdr/core/error.hpp"
#include "hdr/nn/ops.hpp"

namespace hdr::hdrm {

using nn::Tensor;

Tensor valid_counts(const Tensor& validity, int kernel, int stride, int pad) {
  if (validity.ndim() != 4) {
    throw ShapeMismatch("partial_conv: validity must be [N,C,H,W], got " + nn::shape_string(validity.shape()));
  }
  const int n = validity.dim(0), c = validity.dim(1), h = validity.dim(2), w = validity.dim(3);
  const int ho = (h + 2 * pad - kernel) / stride + 1, wo = (w + 2 * pad - kernel) / stride + 1;
  const auto m = validity.data();
  std::vector<double> out(static_cast<std::size_t>(n) * ho * wo);
  for (int b = 0; b < n; ++b) {
    for (int ch = 0; ch < c; ++ch) {
      const double* plane = m.data() + (static_cast<std::size_t>(b) * c + ch) * h * w;
      for (int oy = 0; oy < ho; ++oy) {
        for (int ox = 0; ox < wo; ++ox) {
          double s = 0.0;
          for (int ky = 0; ky < kernel; ++ky) {
            const int iy = oy * stride - pad + ky;
            for (int kx = 0; kx < kernel; ++kx) {
              const int ix = ox * stride - pad + kx;
              s += (iy < 0 || ix < 0 || iy >= h || ix >= w) ? 1.0 : plane[iy * w + ix];
            }
          }
          out[(static_cast<std::size_t>(b) * ho + oy) * wo + ox] += s;
        }
      }
    }
  }
  return Tensor::make({n, 1, ho, wo}, std::move(out));
}

MaskedFeatures partial_conv(const Tensor& x, const Tensor& validity, const Tensor& weight, const Tensor& bias,
                            int stride, int pad) {
  if (x.ndim() != 4 || validity.ndim() != 4 || validity.dim(0) != x.dim(0) || validity.dim(2) != x.dim(2) ||
      validity.dim(3) != x.dim(3) || (validity.dim(1) != 1 && validity.dim(1) != x.dim(1))) {
    throw ShapeMismatch("partial_conv: features " + nn::shape_string(x.shape()) + " vs validity " +
                        nn::shape_string(validity.shape()));
  }
  const int k = weight.dim(2);
  const Tensor counts = valid_counts(validity, k, stride, pad);
  const double window = static_cast<double>(k) * k * validity.dim(1);
  std::vector<double> ratio(counts.numel()), next(counts.numel());
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    const double s = counts.data()[i];
    ratio[i] = s > 0.0 ? window / s : 0.0;
    next[i] = s > 0.0 ? 1.0 : 0.0;
  }
  const Tensor ratio_t = Tensor::make(counts.shape(), std::move(ratio));
  Tensor next_t = Tensor::make(counts.shape(), std::move(next));
  const Tensor masked = validity.dim(1) == 1 ? nn::mul_pixelwise(x, validity) : nn::mul(x, validity);
  Tensor out = nn::mul_pixelwise(nn::conv2d(masked, weight, Tensor(), stride, pad), ratio_t);
  if (bias.defined()) out = nn::add_channel_bias(out, bias);
  out = nn::mul_pixelwise(out, next_t);
  return {out, next_t};
}

}  // namespace hdr::hdrm
