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

#ifndef SCMP_BITSTREAM_H_
#define SCMP_BITSTREAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "scmp/quantizer.h"

namespace scmp {

// Fixed-rate container for a quantized bottleneck.
//
//   bytes 0-3   magic "SCMP"
//   byte  4     version (1)
//   bytes 5-8   image height, u32 big-endian
//   bytes 9-12  image width, u32 big-endian
//   byte  13    F
//   byte  14    ld(L)
//   bytes 15..  indices, ld(L) bits each, MSB first, (height, width, feature)
//               order; the final byte is zero-padded in its low bits.
inline constexpr std::uint8_t kBitstreamMagic[4] = {'S', 'C', 'M', 'P'};
inline constexpr std::uint8_t kBitstreamVersion = 1;
inline constexpr size_t kBitstreamHeaderBytes = 15;

struct DecodedBitstream {
  int image_height = 0;
  int image_width = 0;
  LatentCode code;
};

// L must be a power of two. image dims must equal code dims times d.
std::vector<std::uint8_t> serialize_bitstream(const LatentCode& code,
                                              const QuantizerSpec& q,
                                              int image_height, int image_width,
                                              int downsampling = 16);

// Throws FormatError (bad magic, version, header, truncation, trailing bytes).
DecodedBitstream deserialize_bitstream(std::span<const std::uint8_t> bytes,
                                       int downsampling = 16);

// Number of payload bits, excluding header and padding.
std::uint64_t payload_bits(const LatentCode& code);

}  // namespace scmp

#endif  // SCMP_BITSTREAM_H_
