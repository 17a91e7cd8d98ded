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

#ifndef SCMP_METRICS_H_
#define SCMP_METRICS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "scmp/image.h"

namespace scmp {

// Distortion metrics work on 8-bit images (dynamic range 255) and average
// over channels.

// 10 log10(255^2 / MSE); +infinity when the images are identical.
double psnr(const Image8& x, const Image8& y);
double mse(const Image8& x, const Image8& y);

struct SsimOptions {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
};

// Mean local SSIM over all positions where the Gaussian window fits
// entirely inside the image.
double ssim(const Image8& x, const Image8& y, const SsimOptions& opts = {});

struct MsSsimOptions {
  SsimOptions ssim;
  // One exponent per scale, finest first.
  std::vector<double> weights = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
};

// Smallest height/width that supports every scale of `opts`.
int ms_ssim_min_size(const MsSsimOptions& opts);

// `base` with its coarsest scales dropped until a height x width image fits;
// the kept weights are rescaled to the original weight sum. Throws
// ConfigError when not even the finest scale fits.
MsSsimOptions ms_ssim_fitted(int height, int width, const MsSsimOptions& base = {});

// Product of per-scale contrast-structure means (SSIM mean at the coarsest
// scale), each raised to its weight. Scales are obtained by 2x2 box
// filtering and decimation. Negative per-scale means clamp to zero.
double ms_ssim(const Image8& x, const Image8& y, const MsSsimOptions& opts = {});

// Gaussian window weights, normalized to sum 1, row-major size x size.
std::vector<double> gaussian_window(int size, double sigma);

// Rows are ground truth, columns are prediction.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes);

  int num_classes() const { return k_; }
  std::uint64_t at(int gt, int pred) const {
    return counts_[static_cast<size_t>(gt) * k_ + pred];
  }
  std::uint64_t total() const;

  // Skips ground-truth pixels equal to SegmentationMap::kIgnore. Throws
  // ConfigError on a dims mismatch or class id >= K.
  void accumulate(const SegmentationMap& pred, const SegmentationMap& gt);
  void merge(const ConfusionMatrix& other);

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  int k_;
  std::vector<std::uint64_t> counts_;
};

ConfusionMatrix confusion_accumulate(const SegmentationMap& pred,
                                     const SegmentationMap& gt,
                                     ConfusionMatrix cm);

// IoU per class; classes absent from both ground truth and prediction get
// NaN.
std::vector<double> class_iou(const ConfusionMatrix& cm);

// Mean IoU over classes with non-zero union. Throws DataError if there is
// no such class.
double miou(const ConfusionMatrix& cm);

// One evaluated rate/quality condition.
struct RatePoint {
  std::string method;
  int features = 0;
  int levels = 0;
  std::string mode;
  double bpp = 0.0;
  double psnr_db = 0.0;
  double ssim = 0.0;
  double ms_ssim = 0.0;
  double miou = 0.0;
  std::string seg_model;
  std::uint64_t seed = 0;
  std::string config_hash;
};

}  // namespace scmp

#endif  // SCMP_METRICS_H_
