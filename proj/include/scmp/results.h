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

#ifndef SCMP_RESULTS_H_
#define SCMP_RESULTS_H_

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "scmp/metrics.h"

namespace scmp {

// Column order of rate tables.
inline constexpr const char* kRateCsvHeader =
    "method,F,L,mode,bpp,psnr_db,ssim,ms_ssim,miou,seg_model,seed,config_hash";

// Doubles are written with 17 significant digits so they read back
// bit-identically. Text fields must not contain commas or newlines.
std::string to_csv_row(const RatePoint& p);
RatePoint parse_rate_csv_row(const std::string& line);

void write_rate_csv(const std::filesystem::path& path, const std::vector<RatePoint>& points);
// Throws DataError on a missing file or a malformed row.
std::vector<RatePoint> read_rate_csv(const std::filesystem::path& path);

void to_json(nlohmann::json& j, const RatePoint& p);
void from_json(const nlohmann::json& j, RatePoint& p);

// Number formatting shared by CSV and plots: "%.17g", with "nan"/"inf".
std::string format_double(double v);

}  // namespace scmp

#endif  // SCMP_RESULTS_H_
