// Copyright 2026 The SCMP Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCMP_LOSSES_H_
#define SCMP_LOSSES_H_

#include <vector>

#include <torch/torch.h>

namespace scmp {

// Least-squares GAN objectives with targets real = 1, fake = 0. Each scale's
// patch grid is averaged first, then the scales are averaged.

// 1/2 mean((real - 1)^2) + 1/2 mean(fake^2)
torch::Tensor gan_loss_discriminator(const std::vector<torch::Tensor>& real_logits,
                                     const std::vector<torch::Tensor>& fake_logits);
// 1/2 mean((fake - 1)^2)
torch::Tensor gan_loss_generator(const std::vector<torch::Tensor>& fake_logits);

// Mean absolute difference of each tapped map, averaged over all maps of
// all scales. Real features are treated as constants.
torch::Tensor feature_matching_loss(
    const std::vector<std::vector<torch::Tensor>>& real_features,
    const std::vector<std::vector<torch::Tensor>>& fake_features);

// Pixel MSE over all H*W*C values.
torch::Tensor similarity_loss(const torch::Tensor& x, const torch::Tensor& x_hat);

struct LossWeights {
  double gan = 1.0;
  double feature_matching = 1.0;
  double similarity = 1.0;
};

struct GeneratorLossParts {
  double gan = 0.0;
  double feature_matching = 0.0;
  double similarity = 0.0;
};

// w_gan L_gan + w_fm L_fm + w_sim L_sim. Throws NumericError naming the
// first non-finite part.
double generator_total_loss(const GeneratorLossParts& parts, const LossWeights& w);
torch::Tensor generator_total_loss(const torch::Tensor& gan, const torch::Tensor& fm,
                                   const torch::Tensor& sim, const LossWeights& w);

}  // namespace scmp

#endif  // SCMP_LOSSES_H_
