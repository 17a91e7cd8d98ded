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

#ifndef SCMP_DISCRIMINATOR_H_
#define SCMP_DISCRIMINATOR_H_

#include <utility>
#include <vector>

#include <json.hpp>
#include <torch/torch.h>

namespace scmp {

// Multi-scale PatchGAN layout. Each scale runs `strided_layers` 4x4
// stride-2 convolutions (leaky ReLU, instance norm after the first) and a
// 3x3 logit convolution; successive scales see the input average-pooled by 2.
struct DiscriminatorSpec {
  int scales = 3;
  std::vector<int> channels = {64, 128, 256};  // one per strided layer
  int image_channels = 3;

  int strided_layers() const { return static_cast<int>(channels.size()); }
  // Receptive field v of one patch logit, in input pixels of its scale.
  int receptive_field() const;
  // Feature maps tapped per scale for feature matching (M).
  int taps_per_scale() const { return strided_layers(); }
  // Logit grid (rows, cols) at every scale for an H x W input.
  std::vector<std::pair<int, int>> patch_grids(int height, int width) const;

  void validate() const;

  static DiscriminatorSpec tiny();  // channels (16, 32, 64)

  friend void to_json(nlohmann::json& j, const DiscriminatorSpec& s);
  friend void from_json(const nlohmann::json& j, DiscriminatorSpec& s);
};

struct ScaleOutput {
  torch::Tensor logits;                 // (N, 1, rows, cols)
  std::vector<torch::Tensor> features;  // M post-activation maps
};

class PatchDiscriminatorImpl : public torch::nn::Module {
 public:
  explicit PatchDiscriminatorImpl(const DiscriminatorSpec& spec);
  ScaleOutput forward(torch::Tensor x);

 private:
  std::vector<torch::nn::Sequential> layers_;
  torch::nn::Conv2d logit_{nullptr};
};
TORCH_MODULE(PatchDiscriminator);

class MultiScaleDiscriminatorImpl : public torch::nn::Module {
 public:
  explicit MultiScaleDiscriminatorImpl(const DiscriminatorSpec& spec);

  // One entry per scale, finest first. Throws ConfigError if the input is
  // smaller than one receptive field or a coarse scale would be empty.
  std::vector<ScaleOutput> forward(torch::Tensor x);

  const DiscriminatorSpec& spec() const { return spec_; }

 private:
  DiscriminatorSpec spec_;
  std::vector<PatchDiscriminator> scales_;
  torch::nn::AvgPool2d pool_{nullptr};
};
TORCH_MODULE(MultiScaleDiscriminator);

std::vector<torch::Tensor> logits_of(const std::vector<ScaleOutput>& outputs);
std::vector<std::vector<torch::Tensor>> features_of(const std::vector<ScaleOutput>& outputs);

}  // namespace scmp

#endif  // SCMP_DISCRIMINATOR_H_
