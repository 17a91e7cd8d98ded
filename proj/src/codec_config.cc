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

#include "scmp/codec_config.h"

#include <string>

#include "scmp/errors.h"
#include "scmp/rate.h"

namespace scmp {

std::int64_t CodecConfig::downsampling() const {
  return downsampling_factor(stride, num_strided);
}

double CodecConfig::bpp() const { return bitrate_bpp(features, levels, downsampling()); }

void CodecConfig::validate() const {
  if (features < 1) throw ConfigError("F must be >= 1");
  if (levels < 2) throw ConfigError("L must be >= 2");
  if (stride < 1 || num_strided < 0) throw ConfigError("need s >= 1 and n >= 0");
  if (image_channels < 1) throw ConfigError("image channels must be >= 1");
  const size_t want = static_cast<size_t>(num_strided) + 2;
  if (encoder_channels.size() != want) {
    throw ConfigError("encoder channel schedule needs " + std::to_string(want) +
                      " entries, got " + std::to_string(encoder_channels.size()));
  }
  if (encoder_channels.back() != features) {
    throw ConfigError("last encoder block must output F=" + std::to_string(features) +
                      " feature maps");
  }
  if (decoder_channels.size() != static_cast<size_t>(num_strided) + 1) {
    throw ConfigError("decoder channel schedule needs " +
                      std::to_string(num_strided + 1) + " entries, got " +
                      std::to_string(decoder_channels.size()));
  }
  for (int c : encoder_channels) {
    if (c < 1) throw ConfigError("channel counts must be positive");
  }
  for (int c : decoder_channels) {
    if (c < 1) throw ConfigError("channel counts must be positive");
  }
  if (residual_units < 0) throw ConfigError("residual unit count must be >= 0");
}

CodecConfig CodecConfig::standard(int features, int levels) {
  CodecConfig c;
  c.features = features;
  c.levels = levels;
  c.encoder_channels = {64, 128, 256, 512, 512, features};
  c.decoder_channels = {512, 256, 128, 64, 32};
  return c;
}

CodecConfig CodecConfig::tiny(int features, int levels) {
  CodecConfig c;
  c.features = features;
  c.levels = levels;
  c.encoder_channels = {16, 32, 64, 128, 128, features};
  c.decoder_channels = {128, 64, 32, 16, 16};
  return c;
}

void to_json(nlohmann::json& j, const CodecConfig& c) {
  j = nlohmann::json{{"features", c.features},
                     {"levels", c.levels},
                     {"stride", c.stride},
                     {"num_strided", c.num_strided},
                     {"image_channels", c.image_channels},
                     {"encoder_channels", c.encoder_channels},
                     {"residual_units", c.residual_units},
                     {"decoder_channels", c.decoder_channels}};
}

void from_json(const nlohmann::json& j, CodecConfig& c) {
  CodecConfig defaults;
  c.features = j.value("features", defaults.features);
  c.levels = j.value("levels", defaults.levels);
  c.stride = j.value("stride", defaults.stride);
  c.num_strided = j.value("num_strided", defaults.num_strided);
  c.image_channels = j.value("image_channels", defaults.image_channels);
  c.encoder_channels = j.value("encoder_channels", defaults.encoder_channels);
  c.residual_units = j.value("residual_units", defaults.residual_units);
  c.decoder_channels = j.value("decoder_channels", defaults.decoder_channels);
}

}  // namespace scmp
