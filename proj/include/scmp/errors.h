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

#ifndef SCMP_ERRORS_H_
#define SCMP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace scmp {

// Root of all errors raised by the library. The CLI maps the subclasses
// onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or precondition violation (shapes, divisibility,
// schedule lengths, empty datasets).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A rate target outside what a codec can produce on the given image.
class UnreachableTargetError : public ConfigError {
 public:
  UnreachableTargetError(const std::string& what, double min_bpp, double max_bpp)
      : ConfigError(what), min_bpp_(min_bpp), max_bpp_(max_bpp) {}

  double min_bpp() const { return min_bpp_; }
  double max_bpp() const { return max_bpp_; }

 private:
  double min_bpp_;
  double max_bpp_;
};

enum class FormatErrorKind {
  kBadMagic,
  kUnsupportedVersion,
  kTruncated,
  kBadHeader,
  kTrailingData,
  kIndexOutOfRange,
};

const char* to_string(FormatErrorKind kind);

// Malformed bitstream, checkpoint or latent code.
class FormatError : public Error {
 public:
  FormatError(FormatErrorKind kind, const std::string& what)
      : Error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  FormatErrorKind kind() const { return kind_; }

 private:
  FormatErrorKind kind_;
};

// Non-finite activations or losses.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A required external component (codec, tool) is missing.
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

// Missing or mismatched input data (labels, image pairs).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace scmp

#endif  // SCMP_ERRORS_H_
