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

#include "hdr/hdrm/model.hpp"
#include "hdr/nn/tensor.hpp"

namespace hdr::hdrm {

struct LossWeights {
  double gan = 0.1;
  double l1 = 3.0;
  double perceptual = 0.1;
  double style = 250.0;

  void validate() const;
};

nn::Tensor l1_loss(const nn::Tensor& out, const nn::Tensor& target);

/// Sum over stages of mean |a_l - b_l|.
nn::Tensor perceptual_loss(const std::vector<nn::Tensor>& feats_a, const std::vector<nn::Tensor>& feats_b);
nn::Tensor perceptual_loss(const nn::Tensor& a, const nn::Tensor& b, const FeatureExtractor& phi);

/// [N,C,H,W] -> [N,C,C], F F^T / (C H W).
nn::Tensor gram(const nn::Tensor& features);
/// Sum over stages of mean |G(a_l) - G(b_l)|.
nn::Tensor style_loss(const std::vector<nn::Tensor>& feats_a, const std::vector<nn::Tensor>& feats_b);
nn::Tensor style_loss(const nn::Tensor& a, const nn::Tensor& b, const FeatureExtractor& phi);

/// mean log(1 - sigmoid(z_fake)); at most 0, minimized by the generator.
nn::Tensor generator_gan_term(const nn::Tensor& fake_logits);
/// -mean log sigmoid(z_real) - mean log(1 - sigmoid(z_fake)).
nn::Tensor discriminator_term(const nn::Tensor& real_logits, const nn::Tensor& fake_logits);

nn::Tensor total_loss(const nn::Tensor& gan, const nn::Tensor& l1, const nn::Tensor& perceptual,
                      const nn::Tensor& style, const LossWeights& w);
double total_loss(double gan, double l1, double perceptual, double style, const LossWeights& w);

/// Mean absolute error over the pixels where mask >= 0.5 (all channels);
/// 0 for an empty mask.
double masked_l1(const ImageGrid& a, const ImageGrid& b, const ImageGrid& mask);

}  // namespace hdr::hdrm
