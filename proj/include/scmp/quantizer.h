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

#ifndef SCMP_QUANTIZER_H_
#define SCMP_QUANTIZER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace scmp {

// How the bottleneck quantizer behaves while the generator is trained.
//   kNone: quantization bypassed in training, applied only at inference.
//   kHard: hard forward, zero gradient.
//   kSoft: softmax-weighted level mixture forward and backward.
//   kStraightThrough: hard forward, soft-quantizer gradient backward.
enum class QuantizerMode { kNone, kHard, kSoft, kStraightThrough };

std::string to_string(QuantizerMode mode);
QuantizerMode parse_quantizer_mode(const std::string& name);

// Ordered reconstruction levels of a scalar quantizer.
class QuantizerSpec {
 public:
  // Levels must be strictly increasing, within [-1, 1], at least two.
  explicit QuantizerSpec(std::vector<double> levels,
                         QuantizerMode mode = QuantizerMode::kStraightThrough);

  // L levels evenly spaced over [-1, 1]; L = 4 gives {-1, -1/3, 1/3, 1}.
  static QuantizerSpec uniform(int num_levels,
                               QuantizerMode mode = QuantizerMode::kStraightThrough);

  const std::vector<double>& levels() const { return levels_; }
  int size() const { return static_cast<int>(levels_.size()); }
  QuantizerMode mode() const { return mode_; }
  double min_level() const { return levels_.front(); }
  double max_level() const { return levels_.back(); }

 private:
  std::vector<double> levels_;
  QuantizerMode mode_;
};

// r_hat = c^T softmax(-|c - r|).
double quantize_soft(double r, const QuantizerSpec& q);

// d r_hat / d r, using sign(0) = 0 where r sits exactly on a level.
double quantize_soft_derivative(double r, const QuantizerSpec& q);

// Index of the nearest level; exact midpoints go to the lower index.
int nearest_level(double r, const QuantizerSpec& q);

// Quantized bottleneck: indices into the level table, row-major
// (height, width, feature).
struct LatentCode {
  int height = 0;
  int width = 0;
  int features = 0;
  int num_levels = 0;
  std::vector<std::uint16_t> indices;

  size_t size() const {
    return static_cast<size_t>(height) * width * features;
  }
  std::uint16_t at(int y, int x, int f) const {
    return indices[(static_cast<size_t>(y) * width + x) * features + f];
  }
  bool operator==(const LatentCode&) const = default;
};

// `latent` is laid out (height, width, feature) like LatentCode.
LatentCode quantize_hard(std::span<const float> latent, int height, int width,
                         int features, const QuantizerSpec& q);

// Element-wise c[index]. Throws FormatError on an index >= L.
std::vector<float> dequantize(const LatentCode& code, const QuantizerSpec& q);

}  // namespace scmp

#endif  // SCMP_QUANTIZER_H_
