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

#include "scmp/losses.h"

#include <cmath>
#include <string>

#include "scmp/errors.h"

namespace scmp {
namespace {

void check_same_shape(const torch::Tensor& a, const torch::Tensor& b, const char* what) {
  if (a.sizes() != b.sizes()) {
    throw ConfigError(std::string(what) + ": shape mismatch");
  }
}

void check_finite(double v, const char* part) {
  if (!std::isfinite(v)) {
    throw NumericError(std::string("non-finite generator loss part: ") + part);
  }
}

}  // namespace

torch::Tensor gan_loss_discriminator(const std::vector<torch::Tensor>& real_logits,
                                     const std::vector<torch::Tensor>& fake_logits) {
  if (real_logits.empty() || real_logits.size() != fake_logits.size()) {
    throw ConfigError("gan_loss_discriminator: scale count mismatch");
  }
  torch::Tensor total;
  for (size_t s = 0; s < real_logits.size(); ++s) {
    check_same_shape(real_logits[s], fake_logits[s], "gan_loss_discriminator");
    auto term = 0.5 * (real_logits[s] - 1.0).pow(2).mean() +
                0.5 * fake_logits[s].pow(2).mean();
    total = s == 0 ? term : total + term;
  }
  return total / static_cast<double>(real_logits.size());
}

torch::Tensor gan_loss_generator(const std::vector<torch::Tensor>& fake_logits) {
  if (fake_logits.empty()) throw ConfigError("gan_loss_generator: no scales");
  torch::Tensor total;
  for (size_t s = 0; s < fake_logits.size(); ++s) {
    auto term = 0.5 * (fake_logits[s] - 1.0).pow(2).mean();
    total = s == 0 ? term : total + term;
  }
  return total / static_cast<double>(fake_logits.size());
}

torch::Tensor feature_matching_loss(
    const std::vector<std::vector<torch::Tensor>>& real_features,
    const std::vector<std::vector<torch::Tensor>>& fake_features) {
  if (real_features.empty() || real_features.size() != fake_features.size()) {
    throw ConfigError("feature_matching_loss: scale count mismatch");
  }
  torch::Tensor total;
  int maps = 0;
  for (size_t s = 0; s < real_features.size(); ++s) {
    if (real_features[s].size() != fake_features[s].size()) {
      throw ConfigError("feature_matching_loss: tap count mismatch");
    }
    for (size_t m = 0; m < real_features[s].size(); ++m) {
      check_same_shape(real_features[s][m], fake_features[s][m], "feature_matching_loss");
      auto term = (fake_features[s][m] - real_features[s][m].detach()).abs().mean();
      total = maps == 0 ? term : total + term;
      ++maps;
    }
  }
  if (maps == 0) throw ConfigError("feature_matching_loss: no feature maps");
  return total / static_cast<double>(maps);
}

torch::Tensor similarity_loss(const torch::Tensor& x, const torch::Tensor& x_hat) {
  check_same_shape(x, x_hat, "similarity_loss");
  return (x - x_hat).pow(2).mean();
}

double generator_total_loss(const GeneratorLossParts& parts, const LossWeights& w) {
  check_finite(parts.gan, "gan");
  check_finite(parts.feature_matching, "feature_matching");
  check_finite(parts.similarity, "similarity");
  return w.gan * parts.gan + w.feature_matching * parts.feature_matching +
         w.similarity * parts.similarity;
}

torch::Tensor generator_total_loss(const torch::Tensor& gan, const torch::Tensor& fm,
                                   const torch::Tensor& sim, const LossWeights& w) {
  check_finite(gan.item<double>(), "gan");
  check_finite(fm.item<double>(), "feature_matching");
  check_finite(sim.item<double>(), "similarity");
  return w.gan * gan + w.feature_matching * fm + w.similarity * sim;
}

}  // namespace scmp
