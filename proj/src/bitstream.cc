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

#include "scmp/bitstream.h"

#include <algorithm>
#include <bit>
#include <string>

#include "scmp/errors.h"

namespace scmp {
namespace {

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32_be(std::span<const std::uint8_t> b, size_t pos) {
  return (std::uint32_t{b[pos]} << 24) | (std::uint32_t{b[pos + 1]} << 16) |
         (std::uint32_t{b[pos + 2]} << 8) | std::uint32_t{b[pos + 3]};
}

class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void write(std::uint32_t value, int bits) {
    for (int b = bits - 1; b >= 0; --b) {
      if (fill_ == 0) out_.push_back(0);
      if ((value >> b) & 1u) out_.back() |= static_cast<std::uint8_t>(0x80u >> fill_);
      fill_ = (fill_ + 1) % 8;
    }
  }

 private:
  std::vector<std::uint8_t>& out_;
  int fill_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint32_t read(int bits) {
    std::uint32_t v = 0;
    for (int b = 0; b < bits; ++b, ++pos_) {
      v = (v << 1) | ((in_[pos_ / 8] >> (7 - pos_ % 8)) & 1u);
    }
    return v;
  }
  size_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> in_;
  size_t pos_ = 0;
};

}  // namespace

std::uint64_t payload_bits(const LatentCode& code) {
  const auto l = static_cast<unsigned>(code.num_levels);
  if (code.num_levels < 2 || !std::has_single_bit(l)) {
    throw ConfigError("fixed-rate bitstream requires L to be a power of two, got " +
                      std::to_string(code.num_levels));
  }
  return static_cast<std::uint64_t>(code.size()) *
         static_cast<std::uint64_t>(std::countr_zero(l));
}

std::vector<std::uint8_t> serialize_bitstream(const LatentCode& code,
                                              const QuantizerSpec& q,
                                              int image_height, int image_width,
                                              int downsampling) {
  if (code.num_levels != q.size()) {
    throw ConfigError("latent code and quantizer disagree on L");
  }
  if (code.features < 1 || code.features > 255) {
    throw ConfigError("F must be in [1, 255] for the bitstream header");
  }
  if (code.indices.size() != code.size()) {
    throw ConfigError("latent code size does not match its dimensions");
  }
  if (static_cast<std::int64_t>(code.height) * downsampling != image_height ||
      static_cast<std::int64_t>(code.width) * downsampling != image_width) {
    throw ConfigError("latent dims times d must equal the image dims");
  }
  const std::uint64_t bits = payload_bits(code);
  const int bits_per_index = std::countr_zero(static_cast<unsigned>(code.num_levels));

  std::vector<std::uint8_t> out;
  out.reserve(kBitstreamHeaderBytes + (bits + 7) / 8);
  out.insert(out.end(), std::begin(kBitstreamMagic), std::end(kBitstreamMagic));
  out.push_back(kBitstreamVersion);
  put_u32_be(out, static_cast<std::uint32_t>(image_height));
  put_u32_be(out, static_cast<std::uint32_t>(image_width));
  out.push_back(static_cast<std::uint8_t>(code.features));
  out.push_back(static_cast<std::uint8_t>(bits_per_index));

  BitWriter writer(out);
  for (std::uint16_t index : code.indices) {
    if (index >= code.num_levels) {
      throw FormatError(FormatErrorKind::kIndexOutOfRange,
                        "index " + std::to_string(index) + " >= L");
    }
    writer.write(index, bits_per_index);
  }
  return out;
}

DecodedBitstream deserialize_bitstream(std::span<const std::uint8_t> bytes,
                                       int downsampling) {
  if (bytes.size() < kBitstreamHeaderBytes) {
    if (bytes.size() >= 4 && !std::equal(bytes.begin(), bytes.begin() + 4,
                                         std::begin(kBitstreamMagic))) {
      throw FormatError(FormatErrorKind::kBadMagic, "not an SCMP bitstream");
    }
    throw FormatError(FormatErrorKind::kTruncated,
                      "header needs 15 bytes, got " + std::to_string(bytes.size()));
  }
  if (!std::equal(bytes.begin(), bytes.begin() + 4, std::begin(kBitstreamMagic))) {
    throw FormatError(FormatErrorKind::kBadMagic, "not an SCMP bitstream");
  }
  if (bytes[4] != kBitstreamVersion) {
    throw FormatError(FormatErrorKind::kUnsupportedVersion,
                      "version " + std::to_string(bytes[4]));
  }
  DecodedBitstream out;
  const std::uint32_t h = get_u32_be(bytes, 5);
  const std::uint32_t w = get_u32_be(bytes, 9);
  const int features = bytes[13];
  const int bits_per_index = bytes[14];
  if (downsampling < 1 || h == 0 || w == 0 || h % downsampling != 0 ||
      w % downsampling != 0 || h > (1u << 30) || w > (1u << 30)) {
    throw FormatError(FormatErrorKind::kBadHeader,
                      "image dims " + std::to_string(h) + "x" + std::to_string(w) +
                          " invalid for d=" + std::to_string(downsampling));
  }
  if (features < 1 || bits_per_index < 1 || bits_per_index > 16) {
    throw FormatError(FormatErrorKind::kBadHeader, "F or ld(L) out of range");
  }
  out.image_height = static_cast<int>(h);
  out.image_width = static_cast<int>(w);
  out.code.height = static_cast<int>(h / downsampling);
  out.code.width = static_cast<int>(w / downsampling);
  out.code.features = features;
  out.code.num_levels = 1 << bits_per_index;

  const std::uint64_t bits =
      static_cast<std::uint64_t>(out.code.size()) * static_cast<std::uint64_t>(bits_per_index);
  const std::uint64_t payload_bytes = (bits + 7) / 8;
  const std::uint64_t available = bytes.size() - kBitstreamHeaderBytes;
  if (available < payload_bytes) {
    throw FormatError(FormatErrorKind::kTruncated,
                      "payload needs " + std::to_string(payload_bytes) +
                          " bytes, got " + std::to_string(available));
  }
  if (available > payload_bytes) {
    throw FormatError(FormatErrorKind::kTrailingData,
                      std::to_string(available - payload_bytes) + " extra bytes");
  }
  const auto payload = bytes.subspan(kBitstreamHeaderBytes);
  BitReader reader(payload);
  out.code.indices.resize(out.code.size());
  for (auto& index : out.code.indices) {
    index = static_cast<std::uint16_t>(reader.read(bits_per_index));
  }
  const int pad = static_cast<int>(payload_bytes * 8 - bits);
  if (pad > 0 && reader.read(pad) != 0) {
    throw FormatError(FormatErrorKind::kBadHeader, "non-zero padding bits");
  }
  return out;
}

}  // namespace scmp
