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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>

#include "scmp/errors.h"
#include "scmp/plot.h"
#include "scmp/results.h"

namespace scmp {
namespace {

namespace fs = std::filesystem;

RatePoint point(const std::string& method, int f, int l, const std::string& mode, double bpp,
                double psnr, const std::string& seg = "uncoded") {
  RatePoint p;
  p.method = method;
  p.features = f;
  p.levels = l;
  p.mode = mode;
  p.bpp = bpp;
  p.psnr_db = psnr;
  p.ssim = 0.5 + bpp;
  p.ms_ssim = 0.6 + bpp;
  p.miou = 0.3 + bpp;
  p.seg_model = seg;
  p.seed = 7;
  p.config_hash = "0123456789abcdef";
  return p;
}

std::vector<RatePoint> sample_table() {
  return {point("jpeg", 0, 0, "", 0.25, 28.0), point("jpeg", 0, 0, "", 0.125, 25.0),
          point("webp", 0, 0, "", 0.0625, 24.0),
          point("gan", 8, 2, "st", 0.0156, 21.0), point("gan", 8, 3, "st", 0.0247, 22.0),
          point("gan", 8, 2, "none", 0.0156, 19.0), point("gan", 4, 2, "soft", 0.0078, 18.0),
          point("gan", 8, 2, "st", 0.0156, NAN, "finetune")};
}

TEST(ResultsCsvTest, RowRoundTripIsBitExact) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 200; ++i) {
    RatePoint p = point("gan", i % 9, 2 + i % 5, "st", u(rng), u(rng));
    p.ssim = u(rng) * 1e-12;
    p.ms_ssim = std::nextafter(1.0, 0.0);
    p.miou = i % 3 == 0 ? NAN : u(rng);
    p.seed = rng();
    const RatePoint q = parse_rate_csv_row(to_csv_row(p));
    EXPECT_EQ(q.method, p.method);
    EXPECT_EQ(q.features, p.features);
    EXPECT_EQ(q.levels, p.levels);
    EXPECT_EQ(q.bpp, p.bpp);
    EXPECT_EQ(q.psnr_db, p.psnr_db);
    EXPECT_EQ(q.ssim, p.ssim);
    EXPECT_EQ(q.ms_ssim, p.ms_ssim);
    if (std::isnan(p.miou)) {
      EXPECT_TRUE(std::isnan(q.miou));
    } else {
      EXPECT_EQ(q.miou, p.miou);
    }
    EXPECT_EQ(q.seed, p.seed);
    EXPECT_EQ(q.config_hash, p.config_hash);
  }
}

TEST(ResultsCsvTest, FileRoundTripWithHeader) {
  const fs::path path = fs::path(testing::TempDir()) / "rates.csv";
  write_rate_csv(path, sample_table());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, kRateCsvHeader);
  const auto back = read_rate_csv(path);
  ASSERT_EQ(back.size(), sample_table().size());
  for (size_t i = 0; i < back.size(); ++i) EXPECT_EQ(to_csv_row(back[i]), to_csv_row(sample_table()[i]));
}

TEST(ResultsCsvTest, RejectsMalformedInput) {
  EXPECT_THROW(parse_rate_csv_row("jpeg,0,0"), DataError);
  EXPECT_THROW(parse_rate_csv_row("jpeg,x,0,,0.1,1,1,1,1,u,0,h"), DataError);
  RatePoint p = point("a,b", 0, 0, "", 0.1, 1.0);
  EXPECT_THROW(to_csv_row(p), ConfigError);
  const fs::path path = fs::path(testing::TempDir()) / "bad.csv";
  std::ofstream(path) << "not,a,header\n";
  EXPECT_THROW(read_rate_csv(path), DataError);
  EXPECT_THROW(read_rate_csv(fs::path(testing::TempDir()) / "missing.csv"), DataError);
}

TEST(ResultsJsonTest, RoundTripKeepsNonFinite) {
  for (const auto& p : sample_table()) {
    const nlohmann::json j = p;
    const RatePoint q = nlohmann::json::parse(j.dump()).get<RatePoint>();
    EXPECT_EQ(to_csv_row(q), to_csv_row(p));
  }
}

TEST(PlotTest, SeriesConventions) {
  const auto jpeg = series_style(point("jpeg", 0, 0, "", 0.1, 1));
  EXPECT_EQ(jpeg.color, "#000000");
  EXPECT_FALSE(jpeg.dash.empty());
  const auto st8 = series_style(point("gan", 8, 2, "st", 0.1, 1));
  const auto none8 = series_style(point("gan", 8, 2, "none", 0.1, 1));
  const auto st4 = series_style(point("gan", 4, 2, "st", 0.1, 1));
  EXPECT_TRUE(st8.dash.empty());
  EXPECT_FALSE(none8.dash.empty());
  EXPECT_NE(none8.dash, jpeg.dash);
  EXPECT_EQ(st8.color, none8.color);
  EXPECT_NE(st8.color, st4.color);
  const auto retrained = series_style(point("gan", 8, 2, "st", 0.1, 1, "finetune"));
  EXPECT_EQ(retrained.marker, "star");
  EXPECT_FALSE(retrained.connect);
  // Different L of the same F and mode form one curve over the rate axis.
  EXPECT_EQ(series_key(point("gan", 8, 2, "st", 0.1, 1)), series_key(point("gan", 8, 5, "st", 0.2, 1)));
}

TEST(PlotTest, AxisRangeCoversValues) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> v;
    const int n = 1 + t % 7;
    const double scale = std::pow(10.0, (t % 9) - 4);
    for (int i = 0; i < n; ++i) v.push_back(u(rng) * scale);
    const auto r = axis_range(v);
    EXPECT_LT(r.lo, r.hi);
    for (double x : v) {
      EXPECT_LE(r.lo, x);
      EXPECT_GE(r.hi, x);
    }
  }
  EXPECT_THROW(axis_range({NAN}), ConfigError);
}

TEST(PlotTest, EmitsFourDeterministicPanels) {
  const fs::path a = fs::path(testing::TempDir()) / "plots_a";
  const fs::path b = fs::path(testing::TempDir()) / "plots_b";
  const auto files_a = emit_plots(sample_table(), a);
  const auto files_b = emit_plots(sample_table(), b);
  ASSERT_EQ(files_a.size(), 4u);
  for (size_t i = 0; i < 4; ++i) {
    std::ifstream fa(files_a[i]), fb(files_b[i]);
    const std::string sa((std::istreambuf_iterator<char>(fa)), {});
    const std::string sb((std::istreambuf_iterator<char>(fb)), {});
    EXPECT_EQ(sa, sb);
    EXPECT_NE(sa.find("<svg"), std::string::npos);
  }
  EXPECT_EQ(files_a[0].filename(), "fig_psnr.svg");
  EXPECT_EQ(files_a[3].filename(), "fig_miou.svg");
}

TEST(PlotTest, RetrainedPointsOnlyInMiouPanel) {
  auto table = sample_table();
  table.back().psnr_db = 20.0;
  const std::string psnr = render_panel(table, PlotMetric::kPsnr);
  const std::string miou = render_panel(table, PlotMetric::kMiou);
  EXPECT_EQ(psnr.find("retrained:"), std::string::npos);
  EXPECT_NE(miou.find("retrained:finetune"), std::string::npos);
}

TEST(PlotTest, MarkersStayInsidePlotArea) {
  const std::string svg = render_panel(sample_table(), PlotMetric::kPsnr);
  const std::regex circle("<circle cx=\"([0-9.\\-]+)\" cy=\"([0-9.\\-]+)\"");
  int seen = 0;
  for (std::sregex_iterator it(svg.begin(), svg.end(), circle), end; it != end; ++it) {
    const double x = std::stod((*it)[1]), y = std::stod((*it)[2]);
    if (x > 760 - 250) continue;  // legend swatches
    EXPECT_GE(x, 70.0);
    EXPECT_GE(y, 40.0);
    EXPECT_LE(y, 480.0 - 55.0);
    ++seen;
  }
  EXPECT_GE(seen, 4);
}

TEST(PlotTest, EmptyTableRejected) {
  EXPECT_THROW(emit_plots({}, fs::path(testing::TempDir()) / "empty"), ConfigError);
  auto table = sample_table();
  for (auto& p : table) p.ms_ssim = NAN;
  EXPECT_THROW(render_panel(table, PlotMetric::kMsSsim), ConfigError);
}

}  // namespace
}  // namespace scmp
