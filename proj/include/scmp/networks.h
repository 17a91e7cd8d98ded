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

#ifndef SCMP_NETWORKS_H_
#define SCMP_NETWORKS_H_

#include <vector>

#include <torch/torch.h>

#include "scmp/codec_config.h"
#include "scmp/image.h"
#include "scmp/quantizer.h"

namespace scmp {

// Image <-> NCHW tensor (batch of one).
torch::Tensor to_torch(const ImageTensor& image);
ImageTensor from_torch(const torch::Tensor& chw);
// Stacks 8-bit images into an (N, C, H, W) batch in [-1, 1].
torch::Tensor to_batch(const std::vector<Image8>& images);
std::vector<Image8> from_batch(const torch::Tensor& batch);

// Six conv blocks: a 7x7 stride-1 block, n stride-s 3x3 blocks and a 3x3
// bottleneck block producing F maps. Every block is reflection padding,
// convolution and instance normalization; all but the bottleneck block end
// in ReLU so the latent stays centred on the symmetric level grid.
class EncoderImpl : public torch::nn::Module {
 public:
  explicit EncoderImpl(const CodecConfig& config);

  torch::Tensor forward(torch::Tensor x);
  // Same as forward, but checks the input shape and throws NumericError
  // naming the first block that produced a non-finite value.
  torch::Tensor forward_checked(torch::Tensor x);

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  std::int64_t downsampling() const { return downsampling_; }

 private:
  std::vector<torch::nn::Sequential> blocks_;
  std::int64_t downsampling_;
};
TORCH_MODULE(Encoder);

// conv-IN-ReLU-conv-IN in parallel with the identity.
class ResidualUnitImpl : public torch::nn::Module {
 public:
  explicit ResidualUnitImpl(int channels);
  torch::Tensor forward(torch::Tensor x);

 private:
  torch::nn::Sequential body_;
};
TORCH_MODULE(ResidualUnit);

// Lifts F maps to the residual width, applies the residual units, then n
// transposed convolutions (x s each) and a 7x7 output conv squashed by tanh.
class DecoderImpl : public torch::nn::Module {
 public:
  explicit DecoderImpl(const CodecConfig& config);

  torch::Tensor forward(torch::Tensor latent);

  int num_residual_units() const { return static_cast<int>(residuals_.size()); }
  int num_upsampling_stages() const { return static_cast<int>(upsampling_.size()); }

 private:
  torch::nn::Sequential head_;
  std::vector<ResidualUnit> residuals_;
  std::vector<torch::nn::Sequential> upsampling_;
  torch::nn::Sequential tail_;
};
TORCH_MODULE(Decoder);

// Differentiable quantizer surrogate: levels^T softmax(-|levels - r|) along
// a new trailing axis. `levels` is a 1-D tensor.
torch::Tensor soft_quantize(const torch::Tensor& r, const torch::Tensor& levels);
// Nearest reconstruction value, ties to the lower level. No gradient.
torch::Tensor hard_quantize(const torch::Tensor& r, const torch::Tensor& levels);
// Nearest level index (int64), ties to the lower index.
torch::Tensor hard_quantize_indices(const torch::Tensor& r, const torch::Tensor& levels);

// Quantizer as seen by the decoder during training:
//   kNone            identity (quantization only at inference)
//   kHard            hard forward, zero gradient
//   kSoft            soft forward and gradient
//   kStraightThrough hard forward, soft gradient
torch::Tensor quantize_training(const torch::Tensor& latent, const QuantizerSpec& q);

torch::Tensor levels_tensor(const QuantizerSpec& q,
                            torch::Dtype dtype = torch::kFloat32);

// Encoder + quantizer + decoder.
class GeneratorImpl : public torch::nn::Module {
 public:
  GeneratorImpl(const CodecConfig& config, QuantizerMode training_mode);

  // Training-time reconstruction, quantizer per `training_mode`.
  torch::Tensor forward(torch::Tensor x);
  // Inference reconstruction: always hard-quantizes the bottleneck.
  torch::Tensor reconstruct(torch::Tensor x);

  LatentCode encode(const ImageTensor& image);
  ImageTensor decode(const LatentCode& code);

  const CodecConfig& config() const { return config_; }
  const QuantizerSpec& quantizer() const { return quantizer_; }
  QuantizerMode training_mode() const { return quantizer_.mode(); }

  Encoder encoder{nullptr};
  Decoder decoder{nullptr};

 private:
  CodecConfig config_;
  QuantizerSpec quantizer_;
};
TORCH_MODULE(Generator);

// NCHW latent of one image to the (height, width, feature) layout.
LatentCode latent_to_code(const torch::Tensor& latent, const QuantizerSpec& q);
torch::Tensor code_to_latent(const LatentCode& code, const QuantizerSpec& q);

}  // namespace scmp

#endif  // SCMP_NETWORKS_H_
