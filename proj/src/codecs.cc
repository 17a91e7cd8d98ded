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

#include "scmp/codecs.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <cctype>
#include <fstream>
#include <map>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "scmp/errors.h"
#include "scmp/hash.h"
#include "scmp/rate.h"

namespace scmp {
namespace fs = std::filesystem;

std::string to_string(StandardCodec codec) {
  switch (codec) {
    case StandardCodec::kJpeg:
      return "jpeg";
    case StandardCodec::kJpeg2000:
      return "jpeg2000";
    case StandardCodec::kWebp:
      return "webp";
  }
  return "?";
}

StandardCodec parse_standard_codec(const std::string& name) {
  if (name == "jpeg" || name == "jpg") return StandardCodec::kJpeg;
  if (name == "jpeg2000" || name == "jp2") return StandardCodec::kJpeg2000;
  if (name == "webp") return StandardCodec::kWebp;
  throw ConfigError("unknown codec '" + name + "' (expected jpeg, jpeg2000 or webp)");
}

std::string file_extension(StandardCodec codec) {
  switch (codec) {
    case StandardCodec::kJpeg:
      return ".jpg";
    case StandardCodec::kJpeg2000:
      return ".jp2";
    case StandardCodec::kWebp:
      return ".webp";
  }
  return "";
}

QualityRange quality_range(StandardCodec codec) {
  if (codec == StandardCodec::kJpeg2000) return {1, 1000};
  return {1, 100};
}

namespace {

cv::Mat to_bgr(const Image8& image) {
  if (image.channels != 3) throw ConfigError("codecs expect 3-channel images");
  cv::Mat rgb(image.height, image.width, CV_8UC3, const_cast<std::uint8_t*>(image.data.data()));
  cv::Mat bgr;
  cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
  return bgr;
}

Image8 from_bgr(const cv::Mat& bgr) {
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  Image8 out(rgb.rows, rgb.cols, 3);
  for (int y = 0; y < rgb.rows; ++y) {
    std::memcpy(&out.data[out.index(y, 0, 0)], rgb.ptr<std::uint8_t>(y),
                static_cast<size_t>(rgb.cols) * 3);
  }
  return out;
}

void check_quality(StandardCodec codec, int quality) {
  const auto r = quality_range(codec);
  if (quality < r.min || quality > r.max) {
    throw ConfigError(to_string(codec) + " quality " + std::to_string(quality) +
                      " outside [" + std::to_string(r.min) + ", " + std::to_string(r.max) + "]");
  }
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("cannot write " + path.string());
}

std::string substitute(std::string text, const std::map<std::string, std::string>& vars) {
  for (const auto& [key, value] : vars) {
    const std::string token = "{" + key + "}";
    for (size_t pos = text.find(token); pos != std::string::npos;
         pos = text.find(token, pos + value.size())) {
      text.replace(pos, token.size(), value);
    }
  }
  return text;
}

std::string install_hint(StandardCodec codec) {
  switch (codec) {
    case StandardCodec::kJpeg:
      return "install libjpeg support for OpenCV or set SCMP_JPEG_ENCODE/SCMP_JPEG_DECODE";
    case StandardCodec::kJpeg2000:
      return "install OpenJPEG support for OpenCV or set SCMP_JPEG2000_ENCODE/"
             "SCMP_JPEG2000_DECODE";
    case StandardCodec::kWebp:
      return "install libwebp support for OpenCV or set SCMP_WEBP_ENCODE/SCMP_WEBP_DECODE";
  }
  return "";
}

}  // namespace

bool OpenCvCodecAdapter::available(StandardCodec codec) const {
  return cv::haveImageWriter("x" + file_extension(codec));
}

EncodedImage OpenCvCodecAdapter::encode(const Image8& image, StandardCodec codec, int quality) {
  check_quality(codec, quality);
  if (!available(codec)) {
    throw EnvironmentError(to_string(codec) + " encoder unavailable: " + install_hint(codec));
  }
  std::vector<int> params;
  switch (codec) {
    case StandardCodec::kJpeg:
      params = {cv::IMWRITE_JPEG_QUALITY, quality};
      break;
    case StandardCodec::kJpeg2000:
      params = {cv::IMWRITE_JPEG2000_COMPRESSION_X1000, quality};
      break;
    case StandardCodec::kWebp:
      params = {cv::IMWRITE_WEBP_QUALITY, quality};
      break;
  }
  EncodedImage out;
  out.codec = codec;
  out.quality = quality;
  std::vector<uchar> buf;
  try {
    if (!cv::imencode(file_extension(codec), to_bgr(image), buf, params)) {
      throw Error(to_string(codec) + " encoder failed");
    }
  } catch (const cv::Exception& e) {
    throw Error(to_string(codec) + " encoder failed: " + e.what());
  }
  out.bytes.assign(buf.begin(), buf.end());
  const cv::Mat decoded = cv::imdecode(buf, cv::IMREAD_COLOR);
  if (decoded.empty()) throw Error(to_string(codec) + " decoder failed");
  out.reconstruction = from_bgr(decoded);
  out.bpp = file_bpp(out.bytes.size(), image.height, image.width);
  return out;
}

CommandCodecAdapter::CommandCodecAdapter(std::map<StandardCodec, CommandTemplate> commands,
                                         fs::path work_dir)
    : commands_(std::move(commands)),
      work_dir_(work_dir.empty() ? fs::temp_directory_path() / "scmp_codec_cmd" : work_dir) {}

CommandCodecAdapter CommandCodecAdapter::from_environment() {
  std::map<StandardCodec, CommandTemplate> commands;
  for (auto codec : {StandardCodec::kJpeg, StandardCodec::kJpeg2000, StandardCodec::kWebp}) {
    std::string upper = to_string(codec);
    for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    const char* enc = std::getenv(("SCMP_" + upper + "_ENCODE").c_str());
    const char* dec = std::getenv(("SCMP_" + upper + "_DECODE").c_str());
    if (enc != nullptr && dec != nullptr) commands[codec] = {enc, dec};
  }
  return CommandCodecAdapter(std::move(commands));
}

bool CommandCodecAdapter::available(StandardCodec codec) const {
  const auto it = commands_.find(codec);
  return it != commands_.end() && !it->second.encode.empty() && !it->second.decode.empty();
}

EncodedImage CommandCodecAdapter::encode(const Image8& image, StandardCodec codec, int quality) {
  check_quality(codec, quality);
  if (!available(codec)) {
    throw EnvironmentError("no command configured for " + to_string(codec) + ": " +
                           install_hint(codec));
  }
  const auto& cmd = commands_.at(codec);
  fs::create_directories(work_dir_);
  const auto in = work_dir_ / "input.png";
  const auto coded = work_dir_ / ("coded" + file_extension(codec));
  const auto decoded = work_dir_ / "decoded.png";
  fs::remove(coded);
  fs::remove(decoded);
  write_png(in, image);
  const auto run = [](const std::string& line) {
    if (std::system(line.c_str()) != 0) throw Error("command failed: " + line);
  };
  run(substitute(cmd.encode, {{"in", in.string()},
                              {"out", coded.string()},
                              {"quality", std::to_string(quality)}}));
  run(substitute(cmd.decode, {{"in", coded.string()},
                              {"out", decoded.string()},
                              {"quality", std::to_string(quality)}}));
  EncodedImage out;
  out.codec = codec;
  out.quality = quality;
  out.bytes = read_bytes(coded);
  out.reconstruction = read_image(decoded);
  out.bpp = file_bpp(out.bytes.size(), image.height, image.width);
  return out;
}

GoldenCodecAdapter::GoldenCodecAdapter(fs::path dir, std::shared_ptr<CodecAdapter> recorder)
    : dir_(std::move(dir)), recorder_(std::move(recorder)) {}

bool GoldenCodecAdapter::available(StandardCodec codec) const {
  return (recorder_ && recorder_->available(codec)) || fs::is_directory(dir_ / to_string(codec));
}

fs::path GoldenCodecAdapter::entry_path(const Image8& image, StandardCodec codec,
                                        int quality) const {
  const std::string dims = std::to_string(image.height) + "x" + std::to_string(image.width) +
                           "x" + std::to_string(image.channels);
  const auto digest = fnv1a64(image.data, fnv1a64(dims));
  return dir_ / to_string(codec) /
         (hex64(digest) + "_q" + std::to_string(quality) + file_extension(codec));
}

EncodedImage GoldenCodecAdapter::encode(const Image8& image, StandardCodec codec, int quality) {
  check_quality(codec, quality);
  const auto coded = entry_path(image, codec, quality);
  auto recon = coded;
  recon.replace_extension(".png");
  if (fs::exists(coded) && fs::exists(recon)) {
    EncodedImage out;
    out.codec = codec;
    out.quality = quality;
    out.bytes = read_bytes(coded);
    out.reconstruction = read_image(recon);
    out.bpp = file_bpp(out.bytes.size(), image.height, image.width);
    return out;
  }
  if (!recorder_) {
    throw EnvironmentError("no recorded " + to_string(codec) + " encoding at " +
                           coded.string() + "; " + install_hint(codec));
  }
  auto out = recorder_->encode(image, codec, quality);
  write_bytes(coded, out.bytes);
  write_png(recon, out.reconstruction);
  return out;
}

std::shared_ptr<CodecAdapter> make_codec_adapter(const std::string& spec) {
  if (spec == "opencv") return std::make_shared<OpenCvCodecAdapter>();
  if (spec == "command") {
    return std::make_shared<CommandCodecAdapter>(CommandCodecAdapter::from_environment());
  }
  if (spec.rfind("golden:", 0) == 0) {
    return std::make_shared<GoldenCodecAdapter>(spec.substr(7));
  }
  if (spec.rfind("record:", 0) == 0) {
    return std::make_shared<GoldenCodecAdapter>(spec.substr(7),
                                                std::make_shared<OpenCvCodecAdapter>());
  }
  throw ConfigError("unknown codec adapter '" + spec +
                    "' (expected opencv, command, golden:<dir> or record:<dir>)");
}

EncodedImage encode_standard(CodecAdapter& adapter, const Image8& image, StandardCodec codec,
                             int quality) {
  if (image.height < 1 || image.width < 1) throw ConfigError("empty image");
  auto out = adapter.encode(image, codec, quality);
  if (!out.reconstruction.same_shape(image)) {
    throw Error(to_string(codec) + " reconstruction changed the image dimensions");
  }
  return out;
}

void CodecRequest::validate() const {
  if (!(target_bpp > 0.0) || !std::isfinite(target_bpp)) {
    throw ConfigError("target bpp must be > 0");
  }
  if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be >= 0");
  if (bounds) {
    const auto full = quality_range(codec);
    if (bounds->min > bounds->max || bounds->min < full.min || bounds->max > full.max) {
      throw ConfigError("quality bounds outside the codec range");
    }
  }
}

QualitySearchResult search_quality_for_bpp(CodecAdapter& adapter, const Image8& image,
                                           const CodecRequest& request) {
  request.validate();
  const auto range = request.bounds.value_or(quality_range(request.codec));
  const double target = request.target_bpp;
  QualitySearchResult best;
  bool have_best = false;
  std::map<int, EncodedImage> probes;

  const auto rel_error = [&](double bpp) { return std::abs(bpp - target) / target; };
  const auto probe = [&](int q) -> const EncodedImage& {
    auto it = probes.find(q);
    if (it == probes.end()) {
      it = probes.emplace(q, encode_standard(adapter, image, request.codec, q)).first;
      ++best.encodings;
    }
    const auto& e = it->second;
    const bool better =
        !have_best || rel_error(e.bpp) < rel_error(best.bpp) ||
        (rel_error(e.bpp) == rel_error(best.bpp) && e.bytes.size() < best.encoded.bytes.size());
    if (better) {
      best.quality = q;
      best.bpp = e.bpp;
      best.encoded = e;
      have_best = true;
    }
    return e;
  };
  const auto finish = [&]() {
    best.within_tolerance = rel_error(best.bpp) <= request.tolerance;
    return best;
  };

  const double lo_bpp = probe(range.min).bpp;
  const double hi_bpp = probe(range.max).bpp;
  if (target < lo_bpp * (1.0 - request.tolerance) || target > hi_bpp * (1.0 + request.tolerance)) {
    throw UnreachableTargetError(
        to_string(request.codec) + " cannot reach " + std::to_string(target) +
            " bpp on this image; achievable range is [" + std::to_string(lo_bpp) + ", " +
            std::to_string(hi_bpp) + "] bpp",
        lo_bpp, hi_bpp);
  }
  if (rel_error(best.bpp) <= request.tolerance) return finish();

  int lo = range.min + 1;
  int hi = range.max - 1;
  for (int iter = 0; iter < 20 && lo <= hi; ++iter) {
    const int mid = lo + (hi - lo) / 2;
    const double bpp = probe(mid).bpp;
    if (rel_error(bpp) <= request.tolerance) break;
    if (bpp < target) {
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  return finish();
}

}  // namespace scmp
