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

#ifndef SCMP_TESTS_ORACLES_METRIC_ORACLES_H_
#define SCMP_TESTS_ORACLES_METRIC_ORACLES_H_

// Brute-force reference implementations used only by tests. They share no
// code with the library: direct per-pixel and per-window evaluation.

#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "scmp/image.h"

namespace scmp::oracle {

inline double psnr(const Image8& a, const Image8& b) {
  long double sum = 0.0;
  for (int y = 0; y < a.height; ++y)
    for (int x = 0; x < a.width; ++x)
      for (int c = 0; c < a.channels; ++c) {
        const long double d = static_cast<long double>(a.at(y, x, c)) - b.at(y, x, c);
        sum += d * d;
      }
  const long double m = sum / (static_cast<long double>(a.height) * a.width * a.channels);
  return static_cast<double>(10.0L * std::log10(255.0L * 255.0L / m));
}

using Grid = std::vector<std::vector<double>>;

inline Grid channel(const Image8& img, int c) {
  Grid g(img.height, std::vector<double>(img.width));
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) g[y][x] = img.at(y, x, c);
  return g;
}

inline Grid gaussian2d(int n, double sigma) {
  Grid w(n, std::vector<double>(n));
  double sum = 0.0;
  const double c = (n - 1) / 2.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      w[i][j] = std::exp(-((i - c) * (i - c) + (j - c) * (j - c)) / (2 * sigma * sigma));
      sum += w[i][j];
    }
  for (auto& row : w)
    for (double& v : row) v /= sum;
  return w;
}

// Mean SSIM and mean contrast-structure over all full windows.
inline std::pair<double, double> ssim_cs(const Grid& a, const Grid& b, int n = 11,
                                         double sigma = 1.5) {
  const Grid w = gaussian2d(n, sigma);
  const double c1 = (0.01 * 255) * (0.01 * 255), c2 = (0.03 * 255) * (0.03 * 255);
  const int h = static_cast<int>(a.size()), wd = static_cast<int>(a[0].size());
  double ssim_sum = 0.0, cs_sum = 0.0;
  int count = 0;
  for (int y = 0; y + n <= h; ++y)
    for (int x = 0; x + n <= wd; ++x) {
      double ma = 0, mb = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          ma += w[i][j] * a[y + i][x + j];
          mb += w[i][j] * b[y + i][x + j];
        }
      double va = 0, vb = 0, cov = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double da = a[y + i][x + j] - ma, db = b[y + i][x + j] - mb;
          va += w[i][j] * da * da;
          vb += w[i][j] * db * db;
          cov += w[i][j] * da * db;
        }
      const double cs = (2 * cov + c2) / (va + vb + c2);
      const double l = (2 * ma * mb + c1) / (ma * ma + mb * mb + c1);
      ssim_sum += l * cs;
      cs_sum += cs;
      ++count;
    }
  return {ssim_sum / count, cs_sum / count};
}

inline double ssim(const Image8& a, const Image8& b) {
  double s = 0;
  for (int c = 0; c < a.channels; ++c) s += ssim_cs(channel(a, c), channel(b, c)).first;
  return s / a.channels;
}

// Even dims only: mean of each 2x2 block.
inline Grid halve(const Grid& g) {
  Grid out(g.size() / 2, std::vector<double>(g[0].size() / 2));
  for (size_t y = 0; y < out.size(); ++y)
    for (size_t x = 0; x < out[0].size(); ++x)
      out[y][x] = (g[2 * y][2 * x] + g[2 * y][2 * x + 1] + g[2 * y + 1][2 * x] +
                   g[2 * y + 1][2 * x + 1]) / 4.0;
  return out;
}

inline double ms_ssim(const Image8& a, const Image8& b, const std::vector<double>& weights) {
  double total = 0;
  for (int c = 0; c < a.channels; ++c) {
    Grid ga = channel(a, c), gb = channel(b, c);
    double v = 1.0;
    for (size_t s = 0; s < weights.size(); ++s) {
      const auto [ss, cs] = ssim_cs(ga, gb);
      const double term = s + 1 == weights.size() ? ss : cs;
      v *= std::pow(term > 0 ? term : 0.0, weights[s]);
      ga = halve(ga);
      gb = halve(gb);
    }
    total += v;
  }
  return total / a.channels;
}

// mIoU by explicit per-class pixel sets.
inline double miou(const SegmentationMap& pred, const SegmentationMap& gt, int k) {
  double sum = 0;
  int present = 0;
  for (int cls = 0; cls < k; ++cls) {
    std::set<size_t> p, g;
    for (size_t i = 0; i < gt.labels.size(); ++i) {
      if (gt.labels[i] == SegmentationMap::kIgnore) continue;
      if (pred.labels[i] == cls) p.insert(i);
      if (gt.labels[i] == cls) g.insert(i);
    }
    std::set<size_t> inter, uni = p;
    for (size_t i : g) {
      if (p.count(i)) inter.insert(i);
      uni.insert(i);
    }
    if (uni.empty()) continue;
    sum += static_cast<double>(inter.size()) / static_cast<double>(uni.size());
    ++present;
  }
  return sum / present;
}

}  // namespace scmp::oracle

#endif  // SCMP_TESTS_ORACLES_METRIC_ORACLES_H_
