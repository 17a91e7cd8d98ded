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

#ifndef SCMP_CODECS_H_
#define SCMP_CODECS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scmp/image.h"

namespace scmp {

enum class StandardCodec { kJpeg, kJpeg2000, kWebp };

std::string to_string(StandardCodec codec);
// Accepts "jpeg", "jpeg2000" (or "jp2") and "webp". Throws ConfigError.
StandardCodec parse_standard_codec(const std::string& name);
std::string file_extension(StandardCodec codec);  // ".jpg", ".jp2", ".webp"

// Integer quality parameter range; larger values never give smaller files.
//   jpeg, webp  1 .. 100
//   jpeg2000    1 .. 1000 (compression ratio x1000)
struct QualityRange {
  int min = 1;
  int max = 100;
};
QualityRange quality_range(StandardCodec codec);

struct EncodedImage {
  StandardCodec codec = StandardCodec::kJpeg;
  int quality = 0;
  std::vector<std::uint8_t> bytes;  // complete file, header included
  Image8 reconstruction;
  // 8 * file size / (H * W)
  double bpp = 0.0;
};

class CodecAdapter {
 public:
  virtual ~CodecAdapter() = default;
  virtual std::string name() const = 0;
  virtual bool available(StandardCodec codec) const = 0;
  // Throws EnvironmentError when the codec is missing, Error when the
  // encoder or decoder fails.
  virtual EncodedImage encode(const Image8& image, StandardCodec codec, int quality) = 0;
};

// In-process encoders linked through OpenCV (libjpeg, OpenJPEG, libwebp).
class OpenCvCodecAdapter : public CodecAdapter {
 public:
  std::string name() const override { return "opencv"; }
  bool available(StandardCodec codec) const override;
  EncodedImage encode(const Image8& image, StandardCodec codec, int quality) override;
};

// External command-line encoders. Each template is run through the shell
// after substituting {in}, {out} and {quality}; the encode command reads a
// PNG and writes the compressed file, the decode command does the reverse.
struct CommandTemplate {
  std::string encode;
  std::string decode;
};

class CommandCodecAdapter : public CodecAdapter {
 public:
  explicit CommandCodecAdapter(std::map<StandardCodec, CommandTemplate> commands,
                               std::filesystem::path work_dir = {});

  // Reads SCMP_<CODEC>_ENCODE / SCMP_<CODEC>_DECODE (CODEC = JPEG, JPEG2000,
  // WEBP) from the environment.
  static CommandCodecAdapter from_environment();

  std::string name() const override { return "command"; }
  bool available(StandardCodec codec) const override;
  EncodedImage encode(const Image8& image, StandardCodec codec, int quality) override;

 private:
  std::map<StandardCodec, CommandTemplate> commands_;
  std::filesystem::path work_dir_;
};

// Replays recorded encodings keyed by (codec, image digest, quality). On a
// miss it records through `recorder` when one is given, otherwise throws
// EnvironmentError.
class GoldenCodecAdapter : public CodecAdapter {
 public:
  GoldenCodecAdapter(std::filesystem::path dir, std::shared_ptr<CodecAdapter> recorder = {});

  std::string name() const override { return "golden"; }
  bool available(StandardCodec codec) const override;
  EncodedImage encode(const Image8& image, StandardCodec codec, int quality) override;

  std::filesystem::path entry_path(const Image8& image, StandardCodec codec, int quality) const;

 private:
  std::filesystem::path dir_;
  std::shared_ptr<CodecAdapter> recorder_;
};

// Builds an adapter by name: "opencv", "command" or "golden:<dir>".
std::shared_ptr<CodecAdapter> make_codec_adapter(const std::string& spec);

// Encode with the adapter and check the result keeps the input dimensions.
EncodedImage encode_standard(CodecAdapter& adapter, const Image8& image, StandardCodec codec,
                             int quality);

struct CodecRequest {
  StandardCodec codec = StandardCodec::kJpeg;
  double target_bpp = 0.0;
  double tolerance = 0.10;  // relative
  std::optional<QualityRange> bounds;  // defaults to quality_range(codec)

  void validate() const;  // throws ConfigError
};

struct QualitySearchResult {
  int quality = 0;
  double bpp = 0.0;
  bool within_tolerance = false;
  int encodings = 0;
  EncodedImage encoded;
};

// Integer bisection over the quality parameter, at most 20 probes after
// the two bound probes. Stops at the first quality within tolerance;
// otherwise returns the closest probe, preferring the smaller file when two
// probes are equally far. Throws UnreachableTargetError when the target lies
// outside the achievable range by more than the tolerance.
QualitySearchResult search_quality_for_bpp(CodecAdapter& adapter, const Image8& image,
                                           const CodecRequest& request);

}  // namespace scmp

#endif  // SCMP_CODECS_H_
