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

#include "scmp/networks.h"

#include <cstring>
#include <string>

#include "scmp/errors.h"

namespace scmp {
namespace nn = torch::nn;

namespace {

nn::Sequential conv_block(int in, int out, int kernel, int stride, bool relu) {
  nn::Sequential block(
      nn::ReflectionPad2d(nn::ReflectionPad2dOptions(kernel / 2)),
      nn::Conv2d(nn::Conv2dOptions(in, out, kernel).stride(stride)),
      nn::InstanceNorm2d(nn::InstanceNorm2dOptions(out).eps(1e-5)));
  if (relu) block->push_back(nn::ReLU());
  return block;
}

}  // namespace

torch::Tensor to_torch(const ImageTensor& image) {
  auto t = torch::from_blob(const_cast<float*>(image.values.data()),
                            {image.height, image.width, image.channels},
                            torch::kFloat32);
  return t.permute({2, 0, 1}).unsqueeze(0).contiguous().clone();
}

ImageTensor from_torch(const torch::Tensor& chw) {
  auto t = chw.dim() == 4 ? chw.squeeze(0) : chw;
  t = t.detach().to(torch::kFloat32).permute({1, 2, 0}).contiguous();
  ImageTensor out(static_cast<int>(t.size(0)), static_cast<int>(t.size(1)),
                  static_cast<int>(t.size(2)));
  std::memcpy(out.values.data(), t.data_ptr<float>(), out.values.size() * sizeof(float));
  return out;
}

torch::Tensor to_batch(const std::vector<Image8>& images) {
  std::vector<torch::Tensor> items;
  items.reserve(images.size());
  for (const auto& img : images) {
    auto t = torch::from_blob(const_cast<std::uint8_t*>(img.data.data()),
                              {img.height, img.width, img.channels}, torch::kUInt8);
    items.push_back((t.permute({2, 0, 1}).to(torch::kFloat64) / 127.5 - 1.0)
                        .to(torch::kFloat32));
  }
  return torch::stack(items).contiguous();
}

std::vector<Image8> from_batch(const torch::Tensor& batch) {
  auto t = ((batch.detach().to(torch::kFloat64) + 1.0) * 127.5)
               .round()
               .clamp(0.0, 255.0)
               .to(torch::kUInt8)
               .permute({0, 2, 3, 1})
               .contiguous();
  std::vector<Image8> out;
  for (int64_t n = 0; n < t.size(0); ++n) {
    Image8 img(static_cast<int>(t.size(1)), static_cast<int>(t.size(2)),
               static_cast<int>(t.size(3)));
    std::memcpy(img.data.data(), t[n].data_ptr<std::uint8_t>(), img.data.size());
    out.push_back(std::move(img));
  }
  return out;
}

EncoderImpl::EncoderImpl(const CodecConfig& config)
    : downsampling_(config.downsampling()) {
  config.validate();
  const auto& ch = config.encoder_channels;
  const int last = static_cast<int>(ch.size()) - 1;
  blocks_.push_back(conv_block(config.image_channels, ch[0], 7, 1, true));
  for (int i = 1; i < last; ++i) {
    blocks_.push_back(conv_block(ch[i - 1], ch[i], 3, config.stride, true));
  }
  blocks_.push_back(conv_block(ch[last - 1], ch[last], 3, 1, false));
  for (size_t i = 0; i < blocks_.size(); ++i) {
    register_module("block" + std::to_string(i), blocks_[i]);
  }
}

torch::Tensor EncoderImpl::forward(torch::Tensor x) {
  for (auto& block : blocks_) x = block->forward(x);
  return x;
}

torch::Tensor EncoderImpl::forward_checked(torch::Tensor x) {
  if (x.dim() != 4) throw ConfigError("encoder expects an NCHW tensor");
  if (x.size(2) % downsampling_ != 0 || x.size(3) % downsampling_ != 0) {
    throw ConfigError("image " + std::to_string(x.size(2)) + "x" +
                      std::to_string(x.size(3)) + " is not divisible by d=" +
                      std::to_string(downsampling_));
  }
  for (size_t i = 0; i < blocks_.size(); ++i) {
    x = blocks_[i]->forward(x);
    if (!torch::isfinite(x).all().item<bool>()) {
      throw NumericError("non-finite activation in encoder block " +
                         std::to_string(i + 1));
    }
  }
  return x;
}

ResidualUnitImpl::ResidualUnitImpl(int channels) {
  body_ = register_module(
      "body", nn::Sequential(nn::ReflectionPad2d(nn::ReflectionPad2dOptions(1)),
                             nn::Conv2d(nn::Conv2dOptions(channels, channels, 3)),
                             nn::InstanceNorm2d(nn::InstanceNorm2dOptions(channels)),
                             nn::ReLU(),
                             nn::ReflectionPad2d(nn::ReflectionPad2dOptions(1)),
                             nn::Conv2d(nn::Conv2dOptions(channels, channels, 3)),
                             nn::InstanceNorm2d(nn::InstanceNorm2dOptions(channels))));
}

torch::Tensor ResidualUnitImpl::forward(torch::Tensor x) { return x + body_->forward(x); }

DecoderImpl::DecoderImpl(const CodecConfig& config) {
  config.validate();
  const auto& ch = config.decoder_channels;
  head_ = register_module("head", conv_block(config.features, ch[0], 3, 1, true));
  for (int i = 0; i < config.residual_units; ++i) {
    residuals_.push_back(
        register_module("residual" + std::to_string(i), ResidualUnit(ch[0])));
  }
  for (int i = 1; i <= config.num_strided; ++i) {
    nn::Sequential up(
        nn::ConvTranspose2d(nn::ConvTranspose2dOptions(ch[i - 1], ch[i], 3)
                                .stride(config.stride)
                                .padding(1)
                                .output_padding(config.stride - 1)),
        nn::InstanceNorm2d(nn::InstanceNorm2dOptions(ch[i])), nn::ReLU());
    upsampling_.push_back(register_module("up" + std::to_string(i), up));
  }
  tail_ = register_module(
      "tail", nn::Sequential(nn::ReflectionPad2d(nn::ReflectionPad2dOptions(3)),
                             nn::Conv2d(nn::Conv2dOptions(ch.back(), config.image_channels, 7)),
                             nn::Tanh()));
}

torch::Tensor DecoderImpl::forward(torch::Tensor latent) {
  auto x = head_->forward(latent);
  for (auto& unit : residuals_) x = unit->forward(x);
  for (auto& up : upsampling_) x = up->forward(x);
  return tail_->forward(x);
}

torch::Tensor levels_tensor(const QuantizerSpec& q, torch::Dtype dtype) {
  return torch::tensor(q.levels(), torch::kFloat64).to(dtype);
}

torch::Tensor soft_quantize(const torch::Tensor& r, const torch::Tensor& levels) {
  const auto c = levels.to(r.dtype());
  const auto dist = (r.unsqueeze(-1) - c).abs();
  return (torch::softmax(-dist, -1) * c).sum(-1);
}

torch::Tensor hard_quantize_indices(const torch::Tensor& r, const torch::Tensor& levels) {
  const auto c = levels.to(r.dtype());
  // argmin returns the first minimum, i.e. the lower index on a tie.
  return (r.detach().unsqueeze(-1) - c).abs().argmin(-1);
}

torch::Tensor hard_quantize(const torch::Tensor& r, const torch::Tensor& levels) {
  return levels.to(r.dtype()).index({hard_quantize_indices(r, levels)});
}

torch::Tensor quantize_training(const torch::Tensor& latent, const QuantizerSpec& q) {
  const auto levels = levels_tensor(q, latent.scalar_type());
  switch (q.mode()) {
    case QuantizerMode::kNone:
      return latent;
    case QuantizerMode::kHard:
      return hard_quantize(latent, levels);
    case QuantizerMode::kSoft:
      return soft_quantize(latent, levels);
    case QuantizerMode::kStraightThrough: {
      const auto soft = soft_quantize(latent, levels);
      return hard_quantize(latent, levels) + (soft - soft.detach());
    }
  }
  return latent;
}

GeneratorImpl::GeneratorImpl(const CodecConfig& config, QuantizerMode training_mode)
    : config_(config), quantizer_(QuantizerSpec::uniform(config.levels, training_mode)) {
  config_.validate();
  encoder = register_module("encoder", Encoder(config_));
  decoder = register_module("decoder", Decoder(config_));
}

torch::Tensor GeneratorImpl::forward(torch::Tensor x) {
  return decoder->forward(quantize_training(encoder->forward(x), quantizer_));
}

torch::Tensor GeneratorImpl::reconstruct(torch::Tensor x) {
  const auto latent = encoder->forward_checked(x);
  return decoder->forward(hard_quantize(latent, levels_tensor(quantizer_)));
}

LatentCode latent_to_code(const torch::Tensor& latent, const QuantizerSpec& q) {
  if (latent.dim() != 4 || latent.size(0) != 1) {
    throw ConfigError("expected a (1, F, h, w) latent");
  }
  const auto idx = hard_quantize_indices(latent.squeeze(0), levels_tensor(q))
                       .permute({1, 2, 0})
                       .contiguous()
                       .to(torch::kInt32);
  LatentCode code{static_cast<int>(idx.size(0)), static_cast<int>(idx.size(1)),
                  static_cast<int>(idx.size(2)), q.size(), {}};
  code.indices.resize(code.size());
  const auto* p = idx.data_ptr<int32_t>();
  for (size_t i = 0; i < code.size(); ++i) code.indices[i] = static_cast<std::uint16_t>(p[i]);
  return code;
}

torch::Tensor code_to_latent(const LatentCode& code, const QuantizerSpec& q) {
  auto values = dequantize(code, q);
  return torch::from_blob(values.data(), {code.height, code.width, code.features},
                          torch::kFloat32)
      .permute({2, 0, 1})
      .unsqueeze(0)
      .contiguous()
      .clone();
}

LatentCode GeneratorImpl::encode(const ImageTensor& image) {
  image.validate();
  torch::NoGradGuard no_grad;
  return latent_to_code(encoder->forward_checked(to_torch(image)), quantizer_);
}

ImageTensor GeneratorImpl::decode(const LatentCode& code) {
  if (code.num_levels != quantizer_.size() || code.features != config_.features) {
    throw ConfigError("latent code does not match the generator (F, L)");
  }
  torch::NoGradGuard no_grad;
  return from_torch(decoder->forward(code_to_latent(code, quantizer_)));
}

}  // namespace scmp
