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

#ifndef SCMP_IMAGE_H_
#define SCMP_IMAGE_H_

#include <cstdint>
#include <filesystem>
#include <vector>

namespace scmp {

// Interleaved 8-bit raster, row-major HWC. Channel order is RGB.
struct Image8 {
  int height = 0;
  int width = 0;
  int channels = 3;
  std::vector<std::uint8_t> data;

  Image8() = default;
  Image8(int h, int w, int c, std::uint8_t fill = 0)
      : height(h), width(w), channels(c),
        data(static_cast<size_t>(h) * w * c, fill) {}

  size_t index(int y, int x, int c) const {
    return (static_cast<size_t>(y) * width + x) * channels + c;
  }
  std::uint8_t& at(int y, int x, int c) { return data[index(y, x, c)]; }
  std::uint8_t at(int y, int x, int c) const { return data[index(y, x, c)]; }
  size_t pixel_count() const { return static_cast<size_t>(height) * width; }
  bool same_shape(const Image8& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }
  bool operator==(const Image8&) const = default;
};

// Real-valued raster with gray values in [-1, 1], row-major HWC.
struct ImageTensor {
  int height = 0;
  int width = 0;
  int channels = 3;
  std::vector<float> values;

  ImageTensor() = default;
  ImageTensor(int h, int w, int c, float fill = 0.f)
      : height(h), width(w), channels(c),
        values(static_cast<size_t>(h) * w * c, fill) {}

  size_t index(int y, int x, int c) const {
    return (static_cast<size_t>(y) * width + x) * channels + c;
  }
  float& at(int y, int x, int c) { return values[index(y, x, c)]; }
  float at(int y, int x, int c) const { return values[index(y, x, c)]; }
  bool same_shape(const ImageTensor& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }

  // Throws ConfigError if any value is outside [-1, 1] or not finite.
  void validate() const;
};

// Single-channel class-id map. 255 marks pixels excluded from scoring.
struct SegmentationMap {
  static constexpr std::uint8_t kIgnore = 255;

  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> labels;

  SegmentationMap() = default;
  SegmentationMap(int h, int w, std::uint8_t fill = 0)
      : height(h), width(w), labels(static_cast<size_t>(h) * w, fill) {}

  std::uint8_t& at(int y, int x) { return labels[static_cast<size_t>(y) * width + x]; }
  std::uint8_t at(int y, int x) const {
    return labels[static_cast<size_t>(y) * width + x];
  }
  bool operator==(const SegmentationMap&) const = default;
};

// v / 127.5 - 1
ImageTensor to_signed_unit(const Image8& image);
// round((v + 1) * 127.5) clamped to [0, 255]
Image8 to_8bit(const ImageTensor& image);

Image8 read_image(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Image8& image);
SegmentationMap read_label_map(const std::filesystem::path& path);
void write_label_png(const std::filesystem::path& path, const SegmentationMap& map);

// Factor-2 decimation: area averaging for images, top-left nearest sample
// for label maps so class ids stay exact.
Image8 downsample_half(const Image8& image);
SegmentationMap downsample_half(const SegmentationMap& map);

Image8 flip_horizontal(const Image8& image);
SegmentationMap flip_horizontal(const SegmentationMap& map);

}  // namespace scmp

#endif  // SCMP_IMAGE_H_
