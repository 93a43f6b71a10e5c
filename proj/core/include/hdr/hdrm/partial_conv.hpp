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

#include <string>

#include "hdr/core/rng.hpp"
#include "hdr/nn/layers.hpp"
#include "hdr/nn/tensor.hpp"

namespace hdr::hdrm {

struct MaskedFeatures {
  nn::Tensor features;  ///< [N,C,H,W], zero wherever validity is 0
  nn::Tensor validity;  ///< [N,1,H,W] or per channel [N,C,H,W], in {0,1}, never part of the graph
};

/// Convolution over known pixels only. Per output pixel with s valid inputs in
/// its k x k window: out = W.(x*m) * k^2/s + b and the pixel becomes valid; with
/// s = 0 the output and validity are 0. Padding counts as valid (with value 0)
/// so an all-ones validity reproduces conv2d exactly. A per-channel validity
/// [N,C,H,W] counts known values over channels too (s out of C k^2) and
/// still yields a one-channel validity.
MaskedFeatures partial_conv(const nn::Tensor& x, const nn::Tensor& validity, const nn::Tensor& weight,
                            const nn::Tensor& bias, int stride, int pad);

/// Window counts of valid values summed over channels, ones-padded: [N,1,Ho,Wo].
nn::Tensor valid_counts(const nn::Tensor& validity, int kernel, int stride, int pad);

struct PartialConv2d {
  nn::Conv2d conv;

  PartialConv2d() = default;
  PartialConv2d(nn::ParamStore& ps, const std::string& name, int in_ch, int out_ch, int kernel,
                int stride, Rng& rng)
      : conv(ps, name, in_ch, out_ch, kernel, stride, kernel / 2, rng) {}

  MaskedFeatures operator()(const MaskedFeatures& in) const {
    return partial_conv(in.features, in.validity, conv.weight, conv.bias, conv.stride, conv.pad);
  }
};

}  // namespace hdr::hdrm
