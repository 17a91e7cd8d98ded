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

#include "scmp/discriminator.h"

#include <string>

#include "scmp/errors.h"

namespace scmp {
namespace nn = torch::nn;

int DiscriminatorSpec::receptive_field() const {
  // Strided 4x4 layers, then the 3x3 logit conv at jump 2^layers.
  int rf = 1, jump = 1;
  for (int i = 0; i < strided_layers(); ++i) {
    rf += 3 * jump;
    jump *= 2;
  }
  return rf + 2 * jump;
}

std::vector<std::pair<int, int>> DiscriminatorSpec::patch_grids(int height,
                                                                 int width) const {
  std::vector<std::pair<int, int>> grids;
  int h = height, w = width;
  for (int s = 0; s < scales; ++s) {
    int gh = h, gw = w;
    for (int i = 0; i < strided_layers(); ++i) {
      gh = (gh + 2 - 4) / 2 + 1;
      gw = (gw + 2 - 4) / 2 + 1;
    }
    grids.emplace_back(gh, gw);
    h = (h + 2 - 3) / 2 + 1;
    w = (w + 2 - 3) / 2 + 1;
  }
  return grids;
}

void DiscriminatorSpec::validate() const {
  if (scales < 1) throw ConfigError("discriminator needs at least one scale");
  if (channels.empty()) throw ConfigError("discriminator needs at least one layer");
  for (int c : channels) {
    if (c < 1) throw ConfigError("discriminator channel counts must be positive");
  }
}

DiscriminatorSpec DiscriminatorSpec::tiny() {
  DiscriminatorSpec s;
  s.channels = {16, 32, 64};
  return s;
}

void to_json(nlohmann::json& j, const DiscriminatorSpec& s) {
  j = nlohmann::json{{"scales", s.scales},
                     {"channels", s.channels},
                     {"image_channels", s.image_channels}};
}

void from_json(const nlohmann::json& j, DiscriminatorSpec& s) {
  DiscriminatorSpec d;
  s.scales = j.value("scales", d.scales);
  s.channels = j.value("channels", d.channels);
  s.image_channels = j.value("image_channels", d.image_channels);
}

PatchDiscriminatorImpl::PatchDiscriminatorImpl(const DiscriminatorSpec& spec) {
  int in = spec.image_channels;
  for (int i = 0; i < spec.strided_layers(); ++i) {
    const int out = spec.channels[i];
    nn::Sequential layer(nn::Conv2d(nn::Conv2dOptions(in, out, 4).stride(2).padding(1)));
    if (i > 0) layer->push_back(nn::InstanceNorm2d(nn::InstanceNorm2dOptions(out)));
    layer->push_back(nn::LeakyReLU(nn::LeakyReLUOptions().negative_slope(0.2)));
    layers_.push_back(register_module("layer" + std::to_string(i), layer));
    in = out;
  }
  logit_ = register_module("logit", nn::Conv2d(nn::Conv2dOptions(in, 1, 3).padding(1)));
}

ScaleOutput PatchDiscriminatorImpl::forward(torch::Tensor x) {
  ScaleOutput out;
  for (auto& layer : layers_) {
    x = layer->forward(x);
    out.features.push_back(x);
  }
  out.logits = logit_->forward(x);
  return out;
}

MultiScaleDiscriminatorImpl::MultiScaleDiscriminatorImpl(const DiscriminatorSpec& spec)
    : spec_(spec) {
  spec_.validate();
  for (int s = 0; s < spec_.scales; ++s) {
    scales_.push_back(
        register_module("scale" + std::to_string(s), PatchDiscriminator(spec_)));
  }
  pool_ = register_module(
      "pool", nn::AvgPool2d(nn::AvgPool2dOptions(3).stride(2).padding(1).count_include_pad(false)));
}

std::vector<ScaleOutput> MultiScaleDiscriminatorImpl::forward(torch::Tensor x) {
  const int h = static_cast<int>(x.size(2)), w = static_cast<int>(x.size(3));
  const int v = spec_.receptive_field();
  if (h < v || w < v) {
    throw ConfigError("discriminator input " + std::to_string(h) + "x" + std::to_string(w) +
                      " is smaller than the " + std::to_string(v) + "x" +
                      std::to_string(v) + " receptive field");
  }
  for (const auto& [gh, gw] : spec_.patch_grids(h, w)) {
    if (gh < 1 || gw < 1) {
      throw ConfigError("discriminator input too small for " +
                        std::to_string(spec_.scales) + " scales");
    }
  }
  std::vector<ScaleOutput> outputs;
  for (size_t s = 0; s < scales_.size(); ++s) {
    if (s > 0) x = pool_->forward(x);
    outputs.push_back(scales_[s]->forward(x));
  }
  return outputs;
}

std::vector<torch::Tensor> logits_of(const std::vector<ScaleOutput>& outputs) {
  std::vector<torch::Tensor> out;
  for (const auto& o : outputs) out.push_back(o.logits);
  return out;
}

std::vector<std::vector<torch::Tensor>> features_of(const std::vector<ScaleOutput>& outputs) {
  std::vector<std::vector<torch::Tensor>> out;
  for (const auto& o : outputs) out.push_back(o.features);
  return out;
}

}  // namespace scmp
