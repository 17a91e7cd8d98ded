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

#include "scmp/plot.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "scmp/errors.h"

namespace scmp {

std::string to_string(PlotMetric metric) {
  switch (metric) {
    case PlotMetric::kPsnr:
      return "psnr";
    case PlotMetric::kSsim:
      return "ssim";
    case PlotMetric::kMsSsim:
      return "ms_ssim";
    case PlotMetric::kMiou:
      return "miou";
  }
  return "?";
}

double metric_value(const RatePoint& p, PlotMetric metric) {
  switch (metric) {
    case PlotMetric::kPsnr:
      return p.psnr_db;
    case PlotMetric::kSsim:
      return p.ssim;
    case PlotMetric::kMsSsim:
      return p.ms_ssim;
    case PlotMetric::kMiou:
      return p.miou;
  }
  return NAN;
}

namespace {

const char* metric_axis_label(PlotMetric metric) {
  switch (metric) {
    case PlotMetric::kPsnr:
      return "PSNR [dB]";
    case PlotMetric::kSsim:
      return "SSIM";
    case PlotMetric::kMsSsim:
      return "MS-SSIM";
    case PlotMetric::kMiou:
      return "mIoU";
  }
  return "";
}

bool is_gan(const RatePoint& p) { return p.method == "gan"; }

std::string color_for_features(int f) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};
  return kColors[static_cast<unsigned>(f) % 8];
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v, double step) {
  int decimals = 0;
  while (decimals < 6 && std::abs(step * std::pow(10.0, decimals) -
                                  std::round(step * std::pow(10.0, decimals))) > 1e-9) {
    ++decimals;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double nice = r <= 1.0 ? 1.0 : r <= 2.0 ? 2.0 : r <= 2.5 ? 2.5 : r <= 5.0 ? 5.0 : 10.0;
  return nice * mag;
}

std::string marker_svg(const std::string& shape, double x, double y, const std::string& color) {
  std::ostringstream s;
  const double r = 4.0;
  if (shape == "square") {
    s << "<rect x=\"" << fmt(x - r) << "\" y=\"" << fmt(y - r) << "\" width=\"" << fmt(2 * r)
      << "\" height=\"" << fmt(2 * r) << "\" fill=\"" << color << "\"/>";
  } else if (shape == "triangle") {
    s << "<polygon points=\"" << fmt(x) << "," << fmt(y - r) << " " << fmt(x - r) << ","
      << fmt(y + r) << " " << fmt(x + r) << "," << fmt(y + r) << "\" fill=\"" << color << "\"/>";
  } else if (shape == "diamond") {
    s << "<polygon points=\"" << fmt(x) << "," << fmt(y - r) << " " << fmt(x + r) << ","
      << fmt(y) << " " << fmt(x) << "," << fmt(y + r) << " " << fmt(x - r) << "," << fmt(y)
      << "\" fill=\"" << color << "\"/>";
  } else if (shape == "star") {
    s << "<polygon points=\"";
    for (int i = 0; i < 10; ++i) {
      const double rad = (i % 2 == 0) ? 2.2 * r : 0.9 * r;
      const double a = -M_PI / 2 + i * M_PI / 5;
      s << (i ? " " : "") << fmt(x + rad * std::cos(a)) << "," << fmt(y + rad * std::sin(a));
    }
    s << "\" fill=\"" << color << "\" stroke=\"black\" stroke-width=\"0.5\"/>";
  } else {
    s << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"" << fmt(r) << "\" fill=\""
      << color << "\"/>";
  }
  return s.str();
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

bool is_retrained(const RatePoint& p) {
  return is_gan(p) && !p.seg_model.empty() && p.seg_model != "uncoded";
}

std::string series_key(const RatePoint& p) {
  if (!is_gan(p)) return "codec:" + p.method;
  if (is_retrained(p)) return "retrained:" + p.seg_model + ":F" + std::to_string(p.features);
  return "gan:" + p.mode + ":F" + std::to_string(p.features);
}

SeriesStyle series_style(const RatePoint& p) {
  SeriesStyle s;
  if (!is_gan(p)) {
    s.label = p.method;
    s.color = "#000000";
    s.dash = "2,3";
    s.marker = p.method == "jpeg" ? "square" : p.method == "jpeg2000" ? "triangle" : "diamond";
    return s;
  }
  s.color = color_for_features(p.features);
  const std::string f = " F=" + std::to_string(p.features);
  if (is_retrained(p)) {
    s.label = "GAN" + f + ", seg. retrained (" + p.seg_model + ")";
    s.marker = "star";
    s.connect = false;
  } else if (p.mode == "none") {
    s.label = "GAN" + f + ", w/o quant. in training";
    s.dash = "7,4";
    s.marker = "circle";
  } else {
    s.label = "GAN" + f + ", w/ quant. in training (" + p.mode + ")";
    s.marker = "circle";
  }
  return s;
}

AxisRange axis_range(const std::vector<double>& values) {
  double lo = INFINITY, hi = -INFINITY;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) throw ConfigError("no finite values to plot");
  double span = hi - lo;
  if (span <= 0.0) span = std::max(std::abs(hi) * 0.1, 1e-3);
  const double step = nice_step(span * 1.1);
  AxisRange r;
  r.lo = std::floor((lo - 0.05 * span) / step) * step;
  r.hi = std::ceil((hi + 0.05 * span) / step) * step;
  return r;
}

std::string render_panel(const std::vector<RatePoint>& table, PlotMetric metric) {
  // Series in first-appearance order of their keys after a stable sort, so
  // the output only depends on the table contents.
  std::map<std::string, std::vector<const RatePoint*>> series;
  std::vector<double> xs, ys;
  for (const auto& p : table) {
    const double y = metric_value(p, metric);
    if (!std::isfinite(y) || !std::isfinite(p.bpp)) continue;
    if (is_retrained(p) && metric != PlotMetric::kMiou) continue;
    series[series_key(p)].push_back(&p);
    xs.push_back(p.bpp);
    ys.push_back(y);
  }
  if (xs.empty()) throw ConfigError("no finite " + to_string(metric) + " values to plot");
  const auto xr = axis_range(xs);
  const auto yr = axis_range(ys);

  const double width = 760, height = 480, left = 70, right = 250, top = 40, bottom = 55;
  const double pw = width - left - right, ph = height - top - bottom;
  const auto sx = [&](double v) { return left + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto sy = [&](double v) { return top + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"sans-serif\" "
    << "font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" "
    << "font-size=\"14\">" << metric_axis_label(metric) << " vs. rate</text>\n";

  // Axes, grid and ticks.
  s << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  const double xstep = nice_step(xr.hi - xr.lo), ystep = nice_step(yr.hi - yr.lo);
  std::ostringstream labels;
  for (double v = xr.lo; v <= xr.hi + xstep * 1e-6; v += xstep) {
    s << "<line x1=\"" << fmt(sx(v)) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(sx(v))
      << "\" y2=\"" << fmt(top + ph) << "\"/>\n";
    labels << "<text x=\"" << fmt(sx(v)) << "\" y=\"" << fmt(top + ph + 16)
           << "\" text-anchor=\"middle\">" << tick_label(v, xstep) << "</text>\n";
  }
  for (double v = yr.lo; v <= yr.hi + ystep * 1e-6; v += ystep) {
    s << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(sy(v)) << "\" x2=\"" << fmt(left + pw)
      << "\" y2=\"" << fmt(sy(v)) << "\"/>\n";
    labels << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(sy(v) + 4)
           << "\" text-anchor=\"end\">" << tick_label(v, ystep) << "</text>\n";
  }
  s << "</g>\n" << labels.str();
  s << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw)
    << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  s << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(height - 12)
    << "\" text-anchor=\"middle\">rate [bpp]</text>\n";
  s << "<text transform=\"translate(18," << fmt(top + ph / 2) << ") rotate(-90)\" "
    << "text-anchor=\"middle\">" << metric_axis_label(metric) << "</text>\n";

  // Curves and markers.
  int legend_row = 0;
  for (auto& [key, points] : series) {
    std::stable_sort(points.begin(), points.end(), [](const RatePoint* a, const RatePoint* b) {
      return a->bpp < b->bpp;
    });
    const auto style = series_style(*points.front());
    s << "<g data-series=\"" << escape(key) << "\">\n";
    if (style.connect && points.size() > 1) {
      s << "<polyline fill=\"none\" stroke=\"" << style.color << "\" stroke-width=\"1.8\"";
      if (!style.dash.empty()) s << " stroke-dasharray=\"" << style.dash << "\"";
      s << " points=\"";
      for (size_t i = 0; i < points.size(); ++i) {
        s << (i ? " " : "") << fmt(sx(points[i]->bpp)) << ","
          << fmt(sy(metric_value(*points[i], metric)));
      }
      s << "\"/>\n";
    }
    for (const auto* p : points) {
      s << marker_svg(style.marker, sx(p->bpp), sy(metric_value(*p, metric)), style.color) << "\n";
    }
    s << "</g>\n";

    const double ly = top + 10 + legend_row * 18, lx = left + pw + 15;
    s << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 28)
      << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << (style.connect ? style.color : "none")
      << "\" stroke-width=\"1.8\"";
    if (!style.dash.empty()) s << " stroke-dasharray=\"" << style.dash << "\"";
    s << "/>" << marker_svg(style.marker, lx + 14, ly, style.color) << "<text x=\""
      << fmt(lx + 34) << "\" y=\"" << fmt(ly + 4) << "\" font-size=\"10\">"
      << escape(style.label) << "</text>\n";
    ++legend_row;
  }
  s << "</svg>\n";
  return s.str();
}

std::vector<std::filesystem::path> emit_plots(const std::vector<RatePoint>& table,
                                              const std::filesystem::path& dir) {
  if (table.empty()) throw ConfigError("cannot plot an empty rate table");
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (auto metric : {PlotMetric::kPsnr, PlotMetric::kSsim, PlotMetric::kMsSsim, PlotMetric::kMiou}) {
    const auto path = dir / ("fig_" + to_string(metric) + ".svg");
    std::ofstream file(path);
    if (!file) throw DataError("cannot write " + path.string());
    file << render_panel(table, metric);
    out.push_back(path);
  }
  return out;
}

}  // namespace scmp
