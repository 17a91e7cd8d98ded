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

#include "scmp/rate.h"

#include <bit>
#include <cmath>
#include <string>

#include "scmp/errors.h"

namespace scmp {

std::int64_t downsampling_factor(int stride, int num_strided) {
  if (stride < 1 || num_strided < 0) {
    throw ConfigError("downsampling_factor requires s >= 1 and n >= 0");
  }
  std::int64_t d = 1;
  for (int i = 0; i < num_strided; ++i) d *= stride;
  return d;
}

double bits_per_level(int num_levels) {
  if (num_levels < 2) throw ConfigError("L must be at least 2");
  const auto l = static_cast<unsigned>(num_levels);
  if (std::has_single_bit(l)) return static_cast<double>(std::countr_zero(l));
  return std::log2(static_cast<double>(num_levels));
}

double latent_information_bits(std::int64_t height, std::int64_t width,
                               int features, int num_levels,
                               std::int64_t downsampling) {
  if (downsampling < 1 || height % downsampling != 0 ||
      width % downsampling != 0) {
    throw ConfigError("image " + std::to_string(height) + "x" +
                      std::to_string(width) + " is not divisible by d=" +
                      std::to_string(downsampling));
  }
  const double elements = static_cast<double>(height / downsampling) *
                          static_cast<double>(width / downsampling) * features;
  return elements * bits_per_level(num_levels);
}

double bitrate_bpp(int features, int num_levels, std::int64_t downsampling) {
  if (downsampling < 1) throw ConfigError("d must be positive");
  const double d2 = static_cast<double>(downsampling) * static_cast<double>(downsampling);
  return features * bits_per_level(num_levels) / d2;
}

double file_bpp(std::uint64_t file_bytes, int height, int width) {
  if (height <= 0 || width <= 0) throw ConfigError("empty image");
  return 8.0 * static_cast<double>(file_bytes) /
         (static_cast<double>(height) * static_cast<double>(width));
}

}  // namespace scmp
