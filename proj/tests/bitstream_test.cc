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

#include <random>

#include <gtest/gtest.h>

#include "scmp/errors.h"
#include "scmp/rate.h"

namespace scmp {
namespace {

LatentCode random_code(std::mt19937_64& rng, int h, int w, int f, int l) {
  LatentCode code{h, w, f, l, {}};
  std::uniform_int_distribution<int> u(0, l - 1);
  code.indices.resize(code.size());
  for (auto& i : code.indices) i = static_cast<std::uint16_t>(u(rng));
  return code;
}

TEST(BitstreamTest, HeaderLayoutIsBitExact) {
  const LatentCode code{1, 2, 1, 4, {3, 1}};
  const auto bytes = serialize_bitstream(code, QuantizerSpec::uniform(4), 16, 32);
  const std::vector<std::uint8_t> expected = {
      'S', 'C', 'M', 'P', 1,
      0, 0, 0, 16,    // H
      0, 0, 0, 32,    // W
      1,              // F
      2,              // ld(L)
      0b11010000,     // 11 01 + zero padding
  };
  EXPECT_EQ(bytes, expected);
}

TEST(BitstreamTest, PayloadSizeMatchesLatentInformation) {
  std::mt19937_64 rng(5);
  const auto code = random_code(rng, 4, 8, 8, 4);
  const auto bytes = serialize_bitstream(code, QuantizerSpec::uniform(4), 64, 128);
  // 4 * 8 * 8 elements at 2 bits each.
  EXPECT_EQ(payload_bits(code), 512u);
  EXPECT_EQ(bytes.size(), kBitstreamHeaderBytes + 64);
  EXPECT_EQ(static_cast<double>(payload_bits(code)),
            latent_information_bits(64, 128, 8, 4, 16));
}

TEST(BitstreamTest, RoundTripRandomCodes) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> dim(1, 9), feat(1, 12), bits(1, 6);
  for (int trial = 0; trial < 50; ++trial) {
    const int h = dim(rng), w = dim(rng), f = feat(rng), l = 1 << bits(rng);
    const auto q = QuantizerSpec::uniform(l);
    const auto code = random_code(rng, h, w, f, l);
    const auto bytes = serialize_bitstream(code, q, h * 16, w * 16);
    const auto decoded = deserialize_bitstream(bytes);
    EXPECT_EQ(decoded.code, code);
    EXPECT_EQ(decoded.image_height, h * 16);
    EXPECT_EQ(decoded.image_width, w * 16);
  }
}

TEST(BitstreamTest, CorruptionYieldsDistinctFormatErrors) {
  std::mt19937_64 rng(1);
  const auto code = random_code(rng, 2, 3, 5, 8);
  const auto good = serialize_bitstream(code, QuantizerSpec::uniform(8), 32, 48);

  auto expect_kind = [](std::vector<std::uint8_t> bytes, FormatErrorKind kind) {
    try {
      deserialize_bitstream(bytes);
      ADD_FAILURE() << "expected " << to_string(kind);
    } catch (const FormatError& e) {
      EXPECT_EQ(e.kind(), kind) << e.what();
    }
  };
  auto bad_magic = good;
  bad_magic[0] = 'X';
  expect_kind(bad_magic, FormatErrorKind::kBadMagic);
  auto bad_version = good;
  bad_version[4] = 2;
  expect_kind(bad_version, FormatErrorKind::kUnsupportedVersion);
  expect_kind({good.begin(), good.end() - 1}, FormatErrorKind::kTruncated);
  expect_kind({good.begin(), good.begin() + 7}, FormatErrorKind::kTruncated);
  auto trailing = good;
  trailing.push_back(0);
  expect_kind(trailing, FormatErrorKind::kTrailingData);
  auto bad_dims = good;
  bad_dims[8] = 33;  // H = 33, not divisible by 16
  expect_kind(bad_dims, FormatErrorKind::kBadHeader);
  auto zero_features = good;
  zero_features[13] = 0;
  expect_kind(zero_features, FormatErrorKind::kBadHeader);
}

TEST(BitstreamTest, RandomCorruptionNeverCrashes) {
  std::mt19937_64 rng(2);
  const auto code = random_code(rng, 2, 2, 4, 4);
  const auto good = serialize_bitstream(code, QuantizerSpec::uniform(4), 32, 32);
  std::uniform_int_distribution<size_t> pos(0, good.size() - 1);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int i = 0; i < 500; ++i) {
    auto bytes = good;
    bytes[pos(rng)] = static_cast<std::uint8_t>(byte(rng));
    try {
      const auto decoded = deserialize_bitstream(bytes);
      EXPECT_EQ(decoded.code.size(), decoded.code.indices.size());
    } catch (const FormatError&) {
    }
  }
}

TEST(BitstreamTest, RejectsNonPowerOfTwoLevels) {
  const LatentCode code{1, 1, 1, 3, {2}};
  EXPECT_THROW(serialize_bitstream(code, QuantizerSpec::uniform(3), 16, 16), ConfigError);
}

}  // namespace
}  // namespace scmp
