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

#include "scmp/image.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "scmp/errors.h"

namespace scmp {

void ImageTensor::validate() const {
  if (values.size() != static_cast<size_t>(height) * width * channels) {
    throw ConfigError("image tensor size does not match its dimensions");
  }
  for (float v : values) {
    if (!std::isfinite(v) || v < -1.f || v > 1.f) {
      throw ConfigError("image tensor value outside [-1, 1]: " +
                        std::to_string(v));
    }
  }
}

ImageTensor to_signed_unit(const Image8& image) {
  ImageTensor out(image.height, image.width, image.channels);
  for (size_t i = 0; i < image.data.size(); ++i) {
    out.values[i] = static_cast<float>(image.data[i] / 127.5 - 1.0);
  }
  return out;
}

Image8 to_8bit(const ImageTensor& image) {
  Image8 out(image.height, image.width, image.channels);
  for (size_t i = 0; i < image.values.size(); ++i) {
    const double v = std::round((static_cast<double>(image.values[i]) + 1.0) * 127.5);
    out.data[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  return out;
}

Image8 read_image(const std::filesystem::path& path) {
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw DataError("cannot read image " + path.string());
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  Image8 out(rgb.rows, rgb.cols, 3);
  for (int y = 0; y < rgb.rows; ++y) {
    std::copy_n(rgb.ptr<std::uint8_t>(y), static_cast<size_t>(rgb.cols) * 3,
                out.data.begin() + static_cast<std::ptrdiff_t>(out.index(y, 0, 0)));
  }
  return out;
}

void write_png(const std::filesystem::path& path, const Image8& image) {
  if (image.channels != 3 && image.channels != 1) {
    throw ConfigError("write_png supports 1 or 3 channels");
  }
  const int type = image.channels == 3 ? CV_8UC3 : CV_8UC1;
  cv::Mat mat(image.height, image.width, type,
              const_cast<std::uint8_t*>(image.data.data()));
  // A fresh destination; converting in place would rewrite the caller's pixels.
  cv::Mat out;
  if (image.channels == 3) {
    cv::cvtColor(mat, out, cv::COLOR_RGB2BGR);
  } else {
    out = mat;
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), out)) {
    throw DataError("cannot write " + path.string());
  }
}

SegmentationMap read_label_map(const std::filesystem::path& path) {
  cv::Mat mat = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
  if (mat.empty()) throw DataError("cannot read label map " + path.string());
  SegmentationMap out(mat.rows, mat.cols);
  for (int y = 0; y < mat.rows; ++y) {
    std::copy_n(mat.ptr<std::uint8_t>(y), mat.cols,
                out.labels.begin() + static_cast<std::ptrdiff_t>(y) * mat.cols);
  }
  return out;
}

void write_label_png(const std::filesystem::path& path, const SegmentationMap& map) {
  cv::Mat mat(map.height, map.width, CV_8UC1,
              const_cast<std::uint8_t*>(map.labels.data()));
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), mat)) {
    throw DataError("cannot write " + path.string());
  }
}

Image8 downsample_half(const Image8& image) {
  Image8 out(image.height / 2, image.width / 2, image.channels);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      for (int c = 0; c < image.channels; ++c) {
        const int sum = image.at(2 * y, 2 * x, c) + image.at(2 * y, 2 * x + 1, c) +
                        image.at(2 * y + 1, 2 * x, c) +
                        image.at(2 * y + 1, 2 * x + 1, c);
        out.at(y, x, c) = static_cast<std::uint8_t>((sum + 2) / 4);
      }
    }
  }
  return out;
}

SegmentationMap downsample_half(const SegmentationMap& map) {
  SegmentationMap out(map.height / 2, map.width / 2);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) out.at(y, x) = map.at(2 * y, 2 * x);
  }
  return out;
}

Image8 flip_horizontal(const Image8& image) {
  Image8 out(image.height, image.width, image.channels);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      for (int c = 0; c < image.channels; ++c) {
        out.at(y, x, c) = image.at(y, image.width - 1 - x, c);
      }
    }
  }
  return out;
}

SegmentationMap flip_horizontal(const SegmentationMap& map) {
  SegmentationMap out(map.height, map.width);
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) out.at(y, x) = map.at(y, map.width - 1 - x);
  }
  return out;
}

}  // namespace scmp
