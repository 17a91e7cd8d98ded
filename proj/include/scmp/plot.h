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

#ifndef SCMP_PLOT_H_
#define SCMP_PLOT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "scmp/metrics.h"

namespace scmp {

enum class PlotMetric { kPsnr, kSsim, kMsSsim, kMiou };

std::string to_string(PlotMetric metric);  // "psnr", "ssim", "ms_ssim", "miou"
double metric_value(const RatePoint& p, PlotMetric metric);

// Visual conventions of the rate/quality panels:
//   standard codecs          black, dotted, one marker shape per codec
//   GAN trained without Q    dashed, one colour per F
//   GAN trained with Q       solid, one colour per F
//   retrained segmentation   unconnected stars, mIoU panel only
struct SeriesStyle {
  std::string label;
  std::string color;
  std::string dash;    // SVG stroke-dasharray, empty for solid
  std::string marker;  // circle, square, triangle, diamond, star
  bool connect = true;
};

// Points with the same key share one curve.
std::string series_key(const RatePoint& p);
SeriesStyle series_style(const RatePoint& p);
bool is_retrained(const RatePoint& p);

struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;
};
// Padded range with round ends covering every finite value.
AxisRange axis_range(const std::vector<double>& values);

// Standalone SVG document of one panel. Throws ConfigError when no point
// has a finite value for the metric.
std::string render_panel(const std::vector<RatePoint>& table, PlotMetric metric);

// Writes fig_psnr.svg, fig_ssim.svg, fig_ms_ssim.svg and fig_miou.svg.
// Throws ConfigError on an empty table.
std::vector<std::filesystem::path> emit_plots(const std::vector<RatePoint>& table,
                                              const std::filesystem::path& dir);

}  // namespace scmp

#endif  // SCMP_PLOT_H_
