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

#include "scmp/dataset.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <map>
#include <set>

#include "scmp/errors.h"

namespace scmp {
namespace fs = std::filesystem;

std::string to_string(ResolutionPolicy policy) {
  return policy == ResolutionPolicy::kHalf ? "half" : "native";
}

ResolutionPolicy parse_resolution_policy(const std::string& name) {
  if (name == "native") return ResolutionPolicy::kNative;
  if (name == "half") return ResolutionPolicy::kHalf;
  throw ConfigError("unknown resolution policy '" + name + "' (expected native or half)");
}

std::string to_string(DatasetLayout layout) {
  return layout == DatasetLayout::kCityscapes ? "cityscapes" : "flat";
}

DatasetLayout parse_dataset_layout(const std::string& name) {
  if (name == "cityscapes") return DatasetLayout::kCityscapes;
  if (name == "flat") return DatasetLayout::kFlat;
  throw ConfigError("unknown dataset layout '" + name + "' (expected cityscapes or flat)");
}

void DatasetManifest::validate() const {
  if (!labels.empty() && labels.size() != images.size()) {
    throw DataError("manifest has " + std::to_string(images.size()) + " images but " +
                    std::to_string(labels.size()) + " labels");
  }
}

void to_json(nlohmann::json& j, const DatasetManifest& m) {
  std::vector<std::string> images, labels;
  for (const auto& p : m.images) images.push_back(p.string());
  for (const auto& p : m.labels) labels.push_back(p.string());
  j = nlohmann::json{{"split", m.split},
                     {"resolution", to_string(m.resolution)},
                     {"images", images},
                     {"labels", labels}};
}

void from_json(const nlohmann::json& j, DatasetManifest& m) {
  m.split = j.value("split", std::string("train"));
  m.resolution = parse_resolution_policy(j.value("resolution", std::string("native")));
  m.images.clear();
  m.labels.clear();
  for (const auto& p : j.at("images")) m.images.emplace_back(p.get<std::string>());
  if (j.contains("labels")) {
    for (const auto& p : j.at("labels")) m.labels.emplace_back(p.get<std::string>());
  }
  m.validate();
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Files under `dir` (recursively) whose name ends in `suffix`, keyed by the
// path relative to `dir` with the suffix removed.
std::map<std::string, fs::path> collect(const fs::path& dir, const std::string& suffix) {
  std::map<std::string, fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), dir).generic_string();
    if (ends_with(rel, suffix)) out.emplace(rel.substr(0, rel.size() - suffix.size()), entry.path());
  }
  return out;
}

std::string list_some(const std::vector<std::string>& names) {
  std::string out;
  for (size_t i = 0; i < names.size() && i < 10; ++i) out += (i ? ", " : "") + names[i];
  if (names.size() > 10) out += ", ... (" + std::to_string(names.size()) + " total)";
  return out;
}

}  // namespace

DatasetManifest ingest(const fs::path& root, DatasetLayout layout, const std::string& split,
                       ResolutionPolicy resolution) {
  if (!fs::is_directory(root)) throw DataError("dataset root " + root.string() + " is not a directory");
  std::map<std::string, fs::path> images, labels;
  bool label_tree = false;
  if (layout == DatasetLayout::kCityscapes) {
    images = collect(root / "leftImg8bit" / split, "_leftImg8bit.png");
    const auto label_dir = root / "gtFine" / split;
    label_tree = fs::is_directory(label_dir);
    labels = collect(label_dir, "_gtFine_labelTrainIds.png");
  } else {
    const fs::path base = fs::is_directory(root / split / "images") ? root / split : root;
    images = collect(base / "images", ".png");
    label_tree = fs::is_directory(base / "labels");
    labels = collect(base / "labels", ".png");
  }
  if (images.empty()) {
    throw DataError("no images found under " + root.string() + " (" + to_string(layout) +
                    " layout, split '" + split + "')");
  }
  DatasetManifest m;
  m.split = split;
  m.resolution = resolution;
  if (label_tree) {
    std::vector<std::string> unpaired;
    for (const auto& [key, _] : images) {
      if (!labels.count(key)) unpaired.push_back(key + " (no label)");
    }
    for (const auto& [key, _] : labels) {
      if (!images.count(key)) unpaired.push_back(key + " (no image)");
    }
    if (!unpaired.empty()) throw DataError("unpaired dataset files: " + list_some(unpaired));
  }
  for (const auto& [key, path] : images) {
    m.images.push_back(path);
    if (label_tree) m.labels.push_back(labels.at(key));
  }
  return m;
}

std::vector<Sample> load_samples(const DatasetManifest& manifest) {
  manifest.validate();
  std::vector<Sample> out;
  out.reserve(manifest.size());
  for (size_t i = 0; i < manifest.size(); ++i) {
    Sample s;
    s.name = manifest.images[i].stem().string();
    s.image = read_image(manifest.images[i]);
    if (manifest.has_labels()) {
      s.label = read_label_map(manifest.labels[i]);
      if (s.label.height != s.image.height || s.label.width != s.image.width) {
        throw DataError("label " + manifest.labels[i].string() + " does not match its image size");
      }
    }
    if (manifest.resolution == ResolutionPolicy::kHalf) {
      s.image = downsample_half(s.image);
      if (s.has_label()) s.label = downsample_half(s.label);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void SyntheticSpec::validate() const {
  if (count < 1) throw ConfigError("synthetic count must be >= 1");
  if (height < 16 || width < 16 || height % 16 != 0 || width % 16 != 0) {
    throw ConfigError("synthetic image dims must be positive multiples of 16");
  }
  if (classes < 2 || classes > 255) throw ConfigError("synthetic classes must be in [2, 255]");
}

namespace {

std::array<int, 3> class_color(int k) {
  static constexpr std::array<std::array<int, 3>, 8> kPalette = {{{90, 110, 140},
                                                                  {220, 60, 50},
                                                                  {50, 170, 70},
                                                                  {240, 200, 40},
                                                                  {60, 80, 210},
                                                                  {200, 80, 200},
                                                                  {40, 200, 210},
                                                                  {240, 140, 40}}};
  if (k < static_cast<int>(kPalette.size())) return kPalette[k];
  // Golden-angle hues for larger class counts.
  const double h = std::fmod(k * 137.50776, 360.0) / 60.0;
  const double x = 1.0 - std::abs(std::fmod(h, 2.0) - 1.0);
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(h)) {
    case 0: r = 1, g = x; break;
    case 1: r = x, g = 1; break;
    case 2: g = 1, b = x; break;
    case 3: g = x, b = 1; break;
    case 4: r = x, b = 1; break;
    default: r = 1, b = x; break;
  }
  return {static_cast<int>(40 + 200 * r), static_cast<int>(40 + 200 * g),
          static_cast<int>(40 + 200 * b)};
}

enum class Shape { kRect, kEllipse, kTriangle };

struct ShapeInstance {
  Shape shape;
  int cls;
  double cy, cx, ry, rx;  // centre and half extents
  int shade;              // brightness offset
};

bool inside(const ShapeInstance& s, int y, int x) {
  const double dy = (y + 0.5 - s.cy) / s.ry;
  const double dx = (x + 0.5 - s.cx) / s.rx;
  switch (s.shape) {
    case Shape::kRect:
      return std::abs(dy) <= 1.0 && std::abs(dx) <= 1.0;
    case Shape::kEllipse:
      return dy * dy + dx * dx <= 1.0;
    case Shape::kTriangle:
      // Apex at the top, base at the bottom.
      return dy >= -1.0 && dy <= 1.0 && std::abs(dx) <= (dy + 1.0) / 2.0;
  }
  return false;
}

void paint(Sample& sample, const ShapeInstance& s) {
  const auto color = class_color(s.cls);
  const int y0 = std::max(0, static_cast<int>(std::floor(s.cy - s.ry)));
  const int y1 = std::min(sample.image.height, static_cast<int>(std::ceil(s.cy + s.ry)) + 1);
  const int x0 = std::max(0, static_cast<int>(std::floor(s.cx - s.rx)));
  const int x1 = std::min(sample.image.width, static_cast<int>(std::ceil(s.cx + s.rx)) + 1);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      if (!inside(s, y, x)) continue;
      sample.label.at(y, x) = static_cast<std::uint8_t>(s.cls);
      for (int c = 0; c < 3; ++c) {
        sample.image.at(y, x, c) = static_cast<std::uint8_t>(std::clamp(color[c] + s.shade, 0, 255));
      }
    }
  }
}

}  // namespace

std::vector<Sample> synthesize(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const int h = spec.height, w = spec.width, k = spec.classes;
  std::vector<Sample> out;
  for (int n = 0; n < spec.count; ++n) {
    Sample s;
    char name[16];
    std::snprintf(name, sizeof(name), "%04d", n);
    s.name = name;
    s.image = Image8(h, w, 3);
    s.label = SegmentationMap(h, w, 0);
    const auto bg = class_color(0);
    for (int y = 0; y < h; ++y) {
      const int ramp = 40 * y / h - 20;
      for (int x = 0; x < w; ++x) {
        for (int c = 0; c < 3; ++c) {
          s.image.at(y, x, c) = static_cast<std::uint8_t>(std::clamp(bg[c] + ramp, 0, 255));
        }
      }
    }
    std::uniform_int_distribution<int> n_shapes(k - 1, k + 3);
    std::uniform_int_distribution<int> cls_dist(1, k - 1);
    std::uniform_int_distribution<int> shape_dist(0, 2);
    std::uniform_real_distribution<double> cy(0.0, h), cx(0.0, w);
    std::uniform_real_distribution<double> ry(h / 10.0, h / 4.0), rx(w / 16.0, w / 6.0);
    std::uniform_int_distribution<int> shade(-25, 25);
    std::vector<ShapeInstance> shapes;
    const int total = n_shapes(rng);
    for (int i = 0; i < total; ++i) {
      // The first K-1 shapes cover every foreground class once.
      const int cls = i < k - 1 ? i + 1 : cls_dist(rng);
      shapes.push_back({static_cast<Shape>(shape_dist(rng)), cls, cy(rng), cx(rng), ry(rng),
                        rx(rng), shade(rng)});
    }
    std::shuffle(shapes.begin(), shapes.end(), rng);
    for (const auto& shape : shapes) paint(s, shape);

    // Re-paint any class that ended up fully occluded, on top of the rest.
    for (int cls = 0; cls < k; ++cls) {
      if (std::find(s.label.labels.begin(), s.label.labels.end(), cls) != s.label.labels.end()) {
        continue;
      }
      if (cls == 0) {
        paint(s, {Shape::kRect, 0, h / 16.0, w / 16.0, h / 16.0, w / 16.0, 0});
      } else {
        paint(s, {Shape::kEllipse, cls, cy(rng), cx(rng), h / 8.0, w / 12.0, 0});
      }
    }
    // Repainted classes can occlude each other; disjoint marks along the
    // bottom edge then guarantee every class.
    bool missing = false;
    for (int cls = 0; cls < k; ++cls) {
      missing |= std::find(s.label.labels.begin(), s.label.labels.end(), cls) ==
                 s.label.labels.end();
    }
    if (missing) {
      const double step = static_cast<double>(w) / k;
      for (int cls = 0; cls < k; ++cls) {
        paint(s, {Shape::kRect, cls, h - 3.0, step * (cls + 0.5), 2.0, std::max(0.5, step / 4), 0});
      }
    }
    std::uniform_int_distribution<int> noise(-3, 3);
    for (auto& v : s.image.data) v = static_cast<std::uint8_t>(std::clamp(v + noise(rng), 0, 255));
    out.push_back(std::move(s));
  }
  return out;
}

DatasetManifest generate_synthetic(const SyntheticSpec& spec, const fs::path& out) {
  const auto samples = synthesize(spec);
  DatasetManifest m;
  m.split = "train";
  for (const auto& s : samples) {
    const auto image = out / "images" / (s.name + ".png");
    const auto label = out / "labels" / (s.name + ".png");
    write_png(image, s.image);
    write_label_png(label, s.label);
    m.images.push_back(image);
    m.labels.push_back(label);
  }
  return m;
}

}  // namespace scmp
