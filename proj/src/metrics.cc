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

#include "scmp/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scmp/errors.h"

namespace scmp {
namespace {

struct Plane {
  int h = 0;
  int w = 0;
  std::vector<double> v;
  double at(int y, int x) const { return v[static_cast<size_t>(y) * w + x]; }
};

Plane extract_channel(const Image8& img, int c) {
  Plane p{img.height, img.width, std::vector<double>(img.pixel_count())};
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      p.v[static_cast<size_t>(y) * p.w + x] = img.at(y, x, c);
    }
  }
  return p;
}

// Separable correlation keeping only positions where the window fits.
Plane filter_valid(const Plane& in, const std::vector<double>& taps) {
  const int n = static_cast<int>(taps.size());
  Plane rows{in.h, in.w - n + 1, {}};
  rows.v.assign(static_cast<size_t>(rows.h) * rows.w, 0.0);
  for (int y = 0; y < rows.h; ++y) {
    for (int x = 0; x < rows.w; ++x) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += taps[k] * in.at(y, x + k);
      rows.v[static_cast<size_t>(y) * rows.w + x] = s;
    }
  }
  Plane out{in.h - n + 1, rows.w, {}};
  out.v.assign(static_cast<size_t>(out.h) * out.w, 0.0);
  for (int y = 0; y < out.h; ++y) {
    for (int x = 0; x < out.w; ++x) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += taps[k] * rows.at(y + k, x);
      out.v[static_cast<size_t>(y) * out.w + x] = s;
    }
  }
  return out;
}

std::vector<double> gaussian_taps(int size, double sigma) {
  std::vector<double> taps(size);
  const double center = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - center;
    taps[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

struct SsimMeans {
  double ssim = 0.0;
  double cs = 0.0;
};

SsimMeans ssim_plane(const Plane& a, const Plane& b, const SsimOptions& opts) {
  const auto taps = gaussian_taps(opts.window, opts.sigma);
  Plane aa = a, bb = b, ab = a;
  for (size_t i = 0; i < a.v.size(); ++i) {
    aa.v[i] = a.v[i] * a.v[i];
    bb.v[i] = b.v[i] * b.v[i];
    ab.v[i] = a.v[i] * b.v[i];
  }
  const Plane mu_a = filter_valid(a, taps);
  const Plane mu_b = filter_valid(b, taps);
  const Plane e_aa = filter_valid(aa, taps);
  const Plane e_bb = filter_valid(bb, taps);
  const Plane e_ab = filter_valid(ab, taps);

  const double c1 = std::pow(opts.k1 * opts.dynamic_range, 2);
  const double c2 = std::pow(opts.k2 * opts.dynamic_range, 2);
  SsimMeans m;
  const size_t n = mu_a.v.size();
  for (size_t i = 0; i < n; ++i) {
    const double ma = mu_a.v[i], mb = mu_b.v[i];
    const double va = e_aa.v[i] - ma * ma;
    const double vb = e_bb.v[i] - mb * mb;
    const double cov = e_ab.v[i] - ma * mb;
    const double cs = (2.0 * cov + c2) / (va + vb + c2);
    const double l = (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
    m.ssim += l * cs;
    m.cs += cs;
  }
  m.ssim /= static_cast<double>(n);
  m.cs /= static_cast<double>(n);
  return m;
}

// 2x2 box filter then keep even rows/columns; the last row/column is
// replicated for odd sizes.
Plane halve(const Plane& in) {
  Plane out{(in.h + 1) / 2, (in.w + 1) / 2, {}};
  out.v.resize(static_cast<size_t>(out.h) * out.w);
  for (int y = 0; y < out.h; ++y) {
    const int y0 = 2 * y, y1 = std::min(2 * y + 1, in.h - 1);
    for (int x = 0; x < out.w; ++x) {
      const int x0 = 2 * x, x1 = std::min(2 * x + 1, in.w - 1);
      out.v[static_cast<size_t>(y) * out.w + x] =
          0.25 * (in.at(y0, x0) + in.at(y0, x1) + in.at(y1, x0) + in.at(y1, x1));
    }
  }
  return out;
}

void check_same_shape(const Image8& x, const Image8& y, const char* what) {
  if (!x.same_shape(y)) {
    throw ConfigError(std::string(what) + ": image shapes differ");
  }
  if (x.pixel_count() == 0) throw ConfigError(std::string(what) + ": empty image");
}

}  // namespace

double mse(const Image8& x, const Image8& y) {
  check_same_shape(x, y, "mse");
  double sum = 0.0;
  for (size_t i = 0; i < x.data.size(); ++i) {
    const double d = static_cast<double>(x.data[i]) - y.data[i];
    sum += d * d;
  }
  return sum / static_cast<double>(x.data.size());
}

double psnr(const Image8& x, const Image8& y) {
  const double m = mse(x, y);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

std::vector<double> gaussian_window(int size, double sigma) {
  const auto taps = gaussian_taps(size, sigma);
  std::vector<double> w(static_cast<size_t>(size) * size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) w[static_cast<size_t>(i) * size + j] = taps[i] * taps[j];
  }
  return w;
}

double ssim(const Image8& x, const Image8& y, const SsimOptions& opts) {
  check_same_shape(x, y, "ssim");
  if (x.height < opts.window || x.width < opts.window) {
    throw ConfigError("ssim: image " + std::to_string(x.height) + "x" +
                      std::to_string(x.width) + " is smaller than the " +
                      std::to_string(opts.window) + "x" +
                      std::to_string(opts.window) + " window");
  }
  double sum = 0.0;
  for (int c = 0; c < x.channels; ++c) {
    sum += ssim_plane(extract_channel(x, c), extract_channel(y, c), opts).ssim;
  }
  return sum / x.channels;
}

int ms_ssim_min_size(const MsSsimOptions& opts) {
  const int scales = static_cast<int>(opts.weights.size());
  return (opts.ssim.window - 1) * (1 << (scales - 1)) + 1;
}

MsSsimOptions ms_ssim_fitted(int height, int width, const MsSsimOptions& base) {
  MsSsimOptions out = base;
  double total = 0.0;
  for (double w : base.weights) total += w;
  while (!out.weights.empty() && std::min(height, width) < ms_ssim_min_size(out)) {
    out.weights.pop_back();
  }
  if (out.weights.empty()) {
    throw ConfigError("ms_ssim: image " + std::to_string(height) + "x" + std::to_string(width) +
                      " is smaller than one SSIM window");
  }
  double kept = 0.0;
  for (double w : out.weights) kept += w;
  for (double& w : out.weights) w *= total / kept;
  return out;
}

double ms_ssim(const Image8& x, const Image8& y, const MsSsimOptions& opts) {
  check_same_shape(x, y, "ms_ssim");
  if (opts.weights.empty()) throw ConfigError("ms_ssim: no scales configured");
  const int min_size = ms_ssim_min_size(opts);
  if (x.height < min_size || x.width < min_size) {
    throw ConfigError("ms_ssim: image " + std::to_string(x.height) + "x" +
                      std::to_string(x.width) + " too small for " +
                      std::to_string(opts.weights.size()) +
                      " scales; minimum size is " + std::to_string(min_size) +
                      "x" + std::to_string(min_size));
  }
  const size_t scales = opts.weights.size();
  double sum = 0.0;
  for (int c = 0; c < x.channels; ++c) {
    Plane a = extract_channel(x, c);
    Plane b = extract_channel(y, c);
    double value = 1.0;
    for (size_t s = 0; s < scales; ++s) {
      const SsimMeans m = ssim_plane(a, b, opts.ssim);
      const double term = s + 1 == scales ? m.ssim : m.cs;
      value *= std::pow(std::max(term, 0.0), opts.weights[s]);
      if (s + 1 < scales) {
        a = halve(a);
        b = halve(b);
      }
    }
    sum += value;
  }
  return sum / x.channels;
}

ConfusionMatrix::ConfusionMatrix(int num_classes) : k_(num_classes) {
  if (num_classes < 1 || num_classes >= SegmentationMap::kIgnore) {
    throw ConfigError("class count must be in [1, 254]");
  }
  counts_.assign(static_cast<size_t>(k_) * k_, 0);
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

void ConfusionMatrix::accumulate(const SegmentationMap& pred,
                                 const SegmentationMap& gt) {
  if (pred.height != gt.height || pred.width != gt.width) {
    throw ConfigError("prediction and ground truth dims differ");
  }
  // Validate first so a bad map leaves the matrix untouched.
  for (size_t i = 0; i < gt.labels.size(); ++i) {
    const int g = gt.labels[i];
    if (g == SegmentationMap::kIgnore) continue;
    if (g >= k_ || pred.labels[i] >= k_) {
      throw ConfigError("class id " + std::to_string(std::max<int>(g, pred.labels[i])) +
                        " >= K=" + std::to_string(k_));
    }
  }
  for (size_t i = 0; i < gt.labels.size(); ++i) {
    const int g = gt.labels[i];
    if (g == SegmentationMap::kIgnore) continue;
    ++counts_[static_cast<size_t>(g) * k_ + pred.labels[i]];
  }
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.k_ != k_) throw ConfigError("cannot merge matrices of different K");
  for (size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

ConfusionMatrix confusion_accumulate(const SegmentationMap& pred,
                                     const SegmentationMap& gt,
                                     ConfusionMatrix cm) {
  cm.accumulate(pred, gt);
  return cm;
}

std::vector<double> class_iou(const ConfusionMatrix& cm) {
  const int k = cm.num_classes();
  std::vector<double> iou(k, std::numeric_limits<double>::quiet_NaN());
  for (int c = 0; c < k; ++c) {
    std::uint64_t row = 0, col = 0;
    for (int j = 0; j < k; ++j) {
      row += cm.at(c, j);
      col += cm.at(j, c);
    }
    const std::uint64_t tp = cm.at(c, c);
    const std::uint64_t uni = row + col - tp;  // TP + FN + FP
    if (uni > 0) iou[c] = static_cast<double>(tp) / static_cast<double>(uni);
  }
  return iou;
}

double miou(const ConfusionMatrix& cm) {
  double sum = 0.0;
  int present = 0;
  for (double v : class_iou(cm)) {
    if (std::isnan(v)) continue;
    sum += v;
    ++present;
  }
  if (present == 0) throw DataError("mIoU undefined: no class present");
  return sum / present;
}

}  // namespace scmp
