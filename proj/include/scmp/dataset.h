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

#ifndef SCMP_DATASET_H_
#define SCMP_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "scmp/image.h"

namespace scmp {

enum class ResolutionPolicy { kNative, kHalf };
std::string to_string(ResolutionPolicy policy);
ResolutionPolicy parse_resolution_policy(const std::string& name);

// Directory layouts understood by ingest:
//   cityscapes  leftImg8bit/<split>/<city>/<stem>_leftImg8bit.png with
//               gtFine/<split>/<city>/<stem>_gtFine_labelTrainIds.png
//   flat        <split>/images/<stem>.png with <split>/labels/<stem>.png
//               (or images/ and labels/ directly under root)
enum class DatasetLayout { kCityscapes, kFlat };
std::string to_string(DatasetLayout layout);
DatasetLayout parse_dataset_layout(const std::string& name);

struct DatasetManifest {
  std::string split;
  std::vector<std::filesystem::path> images;
  std::vector<std::filesystem::path> labels;  // empty, or one per image
  ResolutionPolicy resolution = ResolutionPolicy::kNative;

  bool has_labels() const { return !labels.empty(); }
  std::size_t size() const { return images.size(); }
  // Throws DataError when the label list does not align with the images.
  void validate() const;

  friend void to_json(nlohmann::json& j, const DatasetManifest& m);
  friend void from_json(const nlohmann::json& j, DatasetManifest& m);
};

// Sorted, deterministic manifest. Throws DataError on an empty tree or on
// unpaired files (listing them).
DatasetManifest ingest(const std::filesystem::path& root, DatasetLayout layout,
                       const std::string& split = "train",
                       ResolutionPolicy resolution = ResolutionPolicy::kNative);

struct Sample {
  std::string name;
  Image8 image;
  SegmentationMap label;  // 0 x 0 when the set has no labels

  bool has_label() const { return label.height > 0; }
};

// Reads every pair, applying the resolution policy to image and label alike.
std::vector<Sample> load_samples(const DatasetManifest& manifest);

struct SyntheticSpec {
  int count = 8;
  int height = 64;
  int width = 128;
  int classes = 4;  // K, class 0 is the background
  std::uint64_t seed = 0;

  void validate() const;  // dims divisible by 16, 2 <= K <= 255, count >= 1
};

// Seeded scenes of coloured rectangles, ellipses and triangles on a shaded
// background, with pixel-exact label maps in which every class occurs.
std::vector<Sample> synthesize(const SyntheticSpec& spec);

// Writes synthesize(spec) as <out>/images/NNNN.png and <out>/labels/NNNN.png
// and returns the flat-layout manifest of the written files.
DatasetManifest generate_synthetic(const SyntheticSpec& spec, const std::filesystem::path& out);

}  // namespace scmp

#endif  // SCMP_DATASET_H_
