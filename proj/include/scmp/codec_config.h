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

#ifndef SCMP_CODEC_CONFIG_H_
#define SCMP_CODEC_CONFIG_H_

#include <cstdint>
#include <vector>

#include <json.hpp>

namespace scmp {

// Generator hyperparameters. Together with L they fix the bitrate.
struct CodecConfig {
  int features = 8;       // F, bottleneck feature maps
  int levels = 4;         // L, reconstruction levels
  int stride = 2;         // s, per strided layer
  int num_strided = 4;    // n, strided encoder layers
  int image_channels = 3;
  // One entry per encoder block (n + 2); the last must equal F.
  std::vector<int> encoder_channels = {64, 128, 256, 512, 512, 8};
  int residual_units = 9;
  // Residual-unit width followed by the output width of each of the n
  // upsampling stages.
  std::vector<int> decoder_channels = {512, 256, 128, 64, 32};

  std::int64_t downsampling() const;  // d = s^n
  double bpp() const;                 // F ld(L) / d^2

  // Throws ConfigError.
  void validate() const;

  // Full-width schedule.
  static CodecConfig standard(int features, int levels);
  // Desk-scale schedule (16, 32, 64, 128, 128, F), residual width 128.
  static CodecConfig tiny(int features, int levels);

  friend void to_json(nlohmann::json& j, const CodecConfig& c);
  friend void from_json(const nlohmann::json& j, CodecConfig& c);
};

}  // namespace scmp

#endif  // SCMP_CODEC_CONFIG_H_
