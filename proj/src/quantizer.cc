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

#include "scmp/quantizer.h"

#include <algorithm>
#include <cmath>

#include "scmp/errors.h"

namespace scmp {
namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Softmax weights of -|c - r|, shifted by the smallest distance so the
// largest exponent is exp(0).
void soft_weights(double r, const std::vector<double>& levels,
                  std::vector<double>& weights) {
  weights.resize(levels.size());
  double min_dist = std::abs(levels[0] - r);
  for (double c : levels) min_dist = std::min(min_dist, std::abs(c - r));
  double norm = 0.0;
  for (size_t j = 0; j < levels.size(); ++j) {
    weights[j] = std::exp(-(std::abs(levels[j] - r) - min_dist));
    norm += weights[j];
  }
  for (double& w : weights) w /= norm;
}

}  // namespace

std::string to_string(QuantizerMode mode) {
  switch (mode) {
    case QuantizerMode::kNone:
      return "none";
    case QuantizerMode::kHard:
      return "hard";
    case QuantizerMode::kSoft:
      return "soft";
    case QuantizerMode::kStraightThrough:
      return "straight-through";
  }
  return "unknown";
}

QuantizerMode parse_quantizer_mode(const std::string& name) {
  if (name == "none") return QuantizerMode::kNone;
  if (name == "hard") return QuantizerMode::kHard;
  if (name == "soft") return QuantizerMode::kSoft;
  if (name == "straight-through" || name == "ste") {
    return QuantizerMode::kStraightThrough;
  }
  throw ConfigError("unknown quantizer mode '" + name +
                    "' (none, hard, soft, straight-through)");
}

QuantizerSpec::QuantizerSpec(std::vector<double> levels, QuantizerMode mode)
    : levels_(std::move(levels)), mode_(mode) {
  if (levels_.size() < 2) throw ConfigError("quantizer needs at least 2 levels");
  for (size_t j = 0; j < levels_.size(); ++j) {
    if (!(levels_[j] >= -1.0 && levels_[j] <= 1.0)) {
      throw ConfigError("quantizer level outside [-1, 1]");
    }
    if (j > 0 && !(levels_[j] > levels_[j - 1])) {
      throw ConfigError("quantizer levels must be strictly increasing");
    }
  }
}

QuantizerSpec QuantizerSpec::uniform(int num_levels, QuantizerMode mode) {
  if (num_levels < 2) throw ConfigError("quantizer needs at least 2 levels");
  std::vector<double> levels(num_levels);
  for (int j = 0; j < num_levels; ++j) {
    levels[j] = -1.0 + 2.0 * j / (num_levels - 1);
  }
  levels.back() = 1.0;
  return QuantizerSpec(std::move(levels), mode);
}

double quantize_soft(double r, const QuantizerSpec& q) {
  std::vector<double> w;
  soft_weights(r, q.levels(), w);
  double out = 0.0;
  for (size_t j = 0; j < w.size(); ++j) out += q.levels()[j] * w[j];
  return out;
}

double quantize_soft_derivative(double r, const QuantizerSpec& q) {
  // With g_j = d(-|c_j - r|)/dr = sign(c_j - r):
  //   d r_hat / dr = sum_j c_j w_j g_j - r_hat * sum_j w_j g_j
  const auto& c = q.levels();
  std::vector<double> w;
  soft_weights(r, c, w);
  double r_hat = 0.0, cwg = 0.0, wg = 0.0;
  for (size_t j = 0; j < c.size(); ++j) {
    const double g = sign(c[j] - r);
    r_hat += c[j] * w[j];
    cwg += c[j] * w[j] * g;
    wg += w[j] * g;
  }
  return cwg - r_hat * wg;
}

int nearest_level(double r, const QuantizerSpec& q) {
  const auto& c = q.levels();
  int best = 0;
  double best_dist = std::abs(c[0] - r);
  for (int j = 1; j < q.size(); ++j) {
    const double dist = std::abs(c[j] - r);
    if (dist < best_dist) {
      best = j;
      best_dist = dist;
    }
  }
  return best;
}

LatentCode quantize_hard(std::span<const float> latent, int height, int width,
                         int features, const QuantizerSpec& q) {
  LatentCode code{height, width, features, q.size(), {}};
  if (latent.size() != code.size()) {
    throw ConfigError("latent size does not match its dimensions");
  }
  code.indices.resize(latent.size());
  for (size_t i = 0; i < latent.size(); ++i) {
    code.indices[i] = static_cast<std::uint16_t>(nearest_level(latent[i], q));
  }
  return code;
}

std::vector<float> dequantize(const LatentCode& code, const QuantizerSpec& q) {
  std::vector<float> out(code.indices.size());
  for (size_t i = 0; i < code.indices.size(); ++i) {
    if (code.indices[i] >= q.size()) {
      throw FormatError(FormatErrorKind::kIndexOutOfRange,
                        "latent index " + std::to_string(code.indices[i]) +
                            " >= L=" + std::to_string(q.size()));
    }
    out[i] = static_cast<float>(q.levels()[code.indices[i]]);
  }
  return out;
}

}  // namespace scmp
