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

#ifndef SCMP_RATE_H_
#define SCMP_RATE_H_

#include <cstdint>

namespace scmp {

// Overall spatial reduction of n stride-s layers: d = s^n.
std::int64_t downsampling_factor(int stride, int num_strided);

// log2(L). Exact for powers of two.
double bits_per_level(int num_levels);

// Latent information in bits, H*W*F*ld(L)/d^2. H and W must be multiples
// of d (ConfigError otherwise).
double latent_information_bits(std::int64_t height, std::int64_t width,
                               int features, int num_levels,
                               std::int64_t downsampling);

// Fixed-rate bitrate F*ld(L)/d^2 in bits per pixel.
double bitrate_bpp(int features, int num_levels, std::int64_t downsampling);

// Measured rate of a stored file, 8 * bytes / (H * W).
double file_bpp(std::uint64_t file_bytes, int height, int width);

}  // namespace scmp

#endif  // SCMP_RATE_H_
