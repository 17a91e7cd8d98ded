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

#include "scmp/results.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "scmp/errors.h"

namespace scmp {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

void check_text(const std::string& s, const char* field) {
  if (s.find_first_of(",\n\r") != std::string::npos) {
    throw ConfigError(std::string("rate table field ") + field + " contains a separator: " + s);
  }
}

}  // namespace

std::string to_csv_row(const RatePoint& p) {
  check_text(p.method, "method");
  check_text(p.mode, "mode");
  check_text(p.seg_model, "seg_model");
  check_text(p.config_hash, "config_hash");
  std::ostringstream out;
  out << p.method << ',' << p.features << ',' << p.levels << ',' << p.mode << ','
      << format_double(p.bpp) << ',' << format_double(p.psnr_db) << ',' << format_double(p.ssim)
      << ',' << format_double(p.ms_ssim) << ',' << format_double(p.miou) << ',' << p.seg_model
      << ',' << p.seed << ',' << p.config_hash;
  return out.str();
}

RatePoint parse_rate_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  if (cells.size() != 12) {
    throw DataError("rate table row has " + std::to_string(cells.size()) + " cells: " + line);
  }
  RatePoint p;
  try {
    p.method = cells[0];
    p.features = std::stoi(cells[1]);
    p.levels = std::stoi(cells[2]);
    p.mode = cells[3];
    p.bpp = parse_double(cells[4]);
    p.psnr_db = parse_double(cells[5]);
    p.ssim = parse_double(cells[6]);
    p.ms_ssim = parse_double(cells[7]);
    p.miou = parse_double(cells[8]);
    p.seg_model = cells[9];
    p.seed = std::stoull(cells[10]);
    p.config_hash = cells[11];
  } catch (const std::logic_error&) {
    throw DataError("malformed rate table row: " + line);
  }
  return p;
}

void write_rate_csv(const std::filesystem::path& path, const std::vector<RatePoint>& points) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << kRateCsvHeader << '\n';
  for (const auto& p : points) out << to_csv_row(p) << '\n';
}

std::vector<RatePoint> read_rate_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kRateCsvHeader) {
    throw DataError(path.string() + " does not start with the rate table header");
  }
  std::vector<RatePoint> points;
  while (std::getline(in, line)) {
    if (!line.empty()) points.push_back(parse_rate_csv_row(line));
  }
  return points;
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double number_of(const nlohmann::json& j) {
  if (j.is_string()) return parse_double(j.get<std::string>());
  return j.get<double>();
}

}  // namespace

void to_json(nlohmann::json& j, const RatePoint& p) {
  j = nlohmann::json{{"method", p.method},   {"F", p.features},
                     {"L", p.levels},        {"mode", p.mode},
                     {"bpp", number(p.bpp)}, {"psnr_db", number(p.psnr_db)},
                     {"ssim", number(p.ssim)}, {"ms_ssim", number(p.ms_ssim)},
                     {"miou", number(p.miou)}, {"seg_model", p.seg_model},
                     {"seed", p.seed},       {"config_hash", p.config_hash}};
}

void from_json(const nlohmann::json& j, RatePoint& p) {
  p.method = j.at("method").get<std::string>();
  p.features = j.at("F").get<int>();
  p.levels = j.at("L").get<int>();
  p.mode = j.at("mode").get<std::string>();
  p.bpp = number_of(j.at("bpp"));
  p.psnr_db = number_of(j.at("psnr_db"));
  p.ssim = number_of(j.at("ssim"));
  p.ms_ssim = number_of(j.at("ms_ssim"));
  p.miou = number_of(j.at("miou"));
  p.seg_model = j.at("seg_model").get<std::string>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.config_hash = j.at("config_hash").get<std::string>();
}

}  // namespace scmp
