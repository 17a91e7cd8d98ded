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

#ifndef SCMP_SWEEP_H_
#define SCMP_SWEEP_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scmp/codec_config.h"
#include "scmp/codecs.h"
#include "scmp/dataset.h"
#include "scmp/discriminator.h"
#include "scmp/metrics.h"
#include "scmp/quantizer.h"
#include "scmp/segmentation.h"
#include "scmp/trainer.h"

namespace scmp {

// A standard codec swept either at target rates (per-image quality search)
// or at fixed quality parameters.
struct BaselineSpec {
  StandardCodec codec = StandardCodec::kJpeg;
  std::vector<double> target_bpp;
  std::vector<int> qualities;
  double tolerance = 0.10;

  void validate() const;
};

// Where training and evaluation images come from. Synthetic sets are
// generated from `train` and `test`; directory sets are ingested from
// `root` with the "train" and `test_split` splits.
struct DataSource {
  std::string kind = "synthetic";  // synthetic | directory
  SyntheticSpec train{16, 64, 128, 4, 1000};
  SyntheticSpec test{8, 64, 128, 4, 1001};
  std::filesystem::path root;
  DatasetLayout layout = DatasetLayout::kFlat;
  ResolutionPolicy resolution = ResolutionPolicy::kNative;
  std::string test_split = "val";
  int classes = 19;  // for directory sets

  void validate() const;
  int num_classes() const;
};

// Segmentation models used for the mIoU column. The uncoded-trained model
// scores every point; `retrain` lists (F, L, mode) points that also get a
// model fine-tuned on their reconstructions.
struct SegmentationSweep {
  bool enabled = true;
  std::int64_t steps = 400;
  double finetune_fraction = 0.25;
  int batch_size = 4;
  int base_channels = 16;
  double learning_rate = 1e-3;
  struct Point {
    int features = 0;
    int levels = 0;
    QuantizerMode mode = QuantizerMode::kStraightThrough;
  };
  std::vector<Point> retrain;
};

struct SweepConfig {
  std::vector<int> features = {4, 8};
  std::vector<int> levels = {2, 4, 8, 16, 32, 64};
  std::vector<QuantizerMode> modes = {QuantizerMode::kStraightThrough, QuantizerMode::kNone};
  std::vector<BaselineSpec> baselines;
  std::vector<std::uint64_t> seeds = {0};
  std::filesystem::path output_dir = "sweep_out";

  DataSource data;
  std::string network = "tiny";  // tiny | standard
  DiscriminatorSpec discriminator = DiscriminatorSpec::tiny();
  // Epochs, optimiser and batch size of every codec training run; seed and
  // mode are set per point.
  TrainConfig train;
  SegmentationSweep segmentation;
  std::string codec_adapter = "opencv";
  bool use_cache = true;
  bool emit_plots = true;
  int parallelism = 1;  // worker threads for per-image evaluation

  // Throws ConfigError. L values must be powers of two >= 2.
  void validate() const;
  CodecConfig codec_config(int features, int levels) const;

  // Defaults at desk scale: 16 + 8 synthetic 64x128 images, 50 epochs.
  static SweepConfig desk();
};

void to_json(nlohmann::json& j, const BaselineSpec& b);
void from_json(const nlohmann::json& j, BaselineSpec& b);
void to_json(nlohmann::json& j, const DataSource& d);
void from_json(const nlohmann::json& j, DataSource& d);
void to_json(nlohmann::json& j, const SegmentationSweep& s);
void from_json(const nlohmann::json& j, SegmentationSweep& s);
void to_json(nlohmann::json& j, const SweepConfig& c);
// Missing keys keep their defaults.
void from_json(const nlohmann::json& j, SweepConfig& c);

SweepConfig load_sweep_config(const std::filesystem::path& path);
void save_sweep_config(const std::filesystem::path& path, const SweepConfig& config);

struct SweepFailure {
  std::string point;
  std::string error;
};

struct SweepResult {
  std::vector<RatePoint> points;  // in config order, independent of cache state
  std::vector<SweepFailure> failures;
  int ms_ssim_scales = 0;  // scales used for the evaluation image size
  int computed = 0;        // points evaluated in this run
  int reused = 0;          // points read back from the cache
};

using SweepProgress = std::function<void(const std::string&)>;

// Trains (or reuses) every codec and segmentation model, evaluates all
// points on the test set and writes <out>/results.csv, <out>/results.json,
// <out>/config.json and, when enabled, <out>/plots/fig_*.svg. Each point is
// keyed by the hash of everything that determines it; cached points and
// models under <out>/cache are reused when use_cache is set. A failing
// point is recorded and the sweep continues.
SweepResult run_sweep(const SweepConfig& config, const SweepProgress& progress = {});

// Mean PSNR/SSIM/MS-SSIM of reconstructions against originals.
struct DistortionSummary {
  double psnr_db = 0.0;
  double ssim = 0.0;
  double ms_ssim = 0.0;
};
DistortionSummary mean_distortion(const std::vector<Sample>& originals,
                                  const std::vector<Sample>& reconstructions,
                                  const MsSsimOptions& ms_ssim_options, int parallelism = 1);

}  // namespace scmp

#endif  // SCMP_SWEEP_H_
