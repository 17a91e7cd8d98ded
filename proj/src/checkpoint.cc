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

#include "scmp/checkpoint.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "scmp/errors.h"

namespace scmp {
namespace {

constexpr char kMagic[4] = {'S', 'C', 'K', 'P'};
constexpr std::uint8_t kVersion = 1;

std::string dtype_name(torch::Dtype dtype) {
  switch (dtype) {
    case torch::kFloat32:
      return "f32";
    case torch::kFloat64:
      return "f64";
    case torch::kInt64:
      return "i64";
    default:
      throw ConfigError("checkpoint: unsupported tensor dtype");
  }
}

torch::Dtype dtype_from_name(const std::string& name) {
  if (name == "f32") return torch::kFloat32;
  if (name == "f64") return torch::kFloat64;
  if (name == "i64") return torch::kInt64;
  throw FormatError(FormatErrorKind::kBadHeader, "unknown dtype " + name);
}

}  // namespace

const torch::Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return &t;
  }
  return nullptr;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  nlohmann::json header;
  header["meta"] = ckpt.meta;
  header["tensors"] = nlohmann::json::array();
  header["blobs"] = nlohmann::json::array();
  std::string data;
  for (const auto& [name, tensor] : ckpt.tensors) {
    const auto t = tensor.detach().cpu().contiguous();
    const size_t bytes = t.numel() * t.element_size();
    header["tensors"].push_back({{"name", name},
                                 {"dtype", dtype_name(t.scalar_type())},
                                 {"shape", t.sizes().vec()},
                                 {"offset", data.size()},
                                 {"bytes", bytes}});
    data.append(static_cast<const char*>(t.data_ptr()), bytes);
  }
  for (const auto& [name, blob] : ckpt.blobs) {
    header["blobs"].push_back({{"name", name}, {"offset", data.size()}, {"bytes", blob.size()}});
    data.append(blob);
  }
  const std::string text = header.dump();
  const std::uint64_t len = text.size();

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(kMagic, 4);
    out.put(static_cast<char>(kVersion));
    for (int i = 0; i < 8; ++i) out.put(static_cast<char>((len >> (8 * i)) & 0xff));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw DataError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 13) throw FormatError(FormatErrorKind::kTruncated, path.string());
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError(FormatErrorKind::kBadMagic, path.string() + " is not a checkpoint");
  }
  if (static_cast<std::uint8_t>(bytes[4]) != kVersion) {
    throw FormatError(FormatErrorKind::kUnsupportedVersion, path.string());
  }
  std::uint64_t len = 0;
  for (int i = 0; i < 8; ++i) {
    len |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(bytes[5 + i])) << (8 * i);
  }
  if (len > bytes.size() - 13) throw FormatError(FormatErrorKind::kTruncated, "header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(13, len));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(FormatErrorKind::kBadHeader, e.what());
  }
  const size_t base = 13 + len;
  const size_t data_size = bytes.size() - base;
  Checkpoint ckpt;
  try {
    ckpt.meta = header.at("meta");
    for (const auto& entry : header.at("tensors")) {
      const auto offset = entry.at("offset").get<size_t>();
      const auto size = entry.at("bytes").get<size_t>();
      if (offset > data_size || size > data_size - offset) {
        throw FormatError(FormatErrorKind::kTruncated, entry.at("name").get<std::string>());
      }
      const auto shape = entry.at("shape").get<std::vector<int64_t>>();
      auto t = torch::empty(shape, torch::TensorOptions().dtype(
                                       dtype_from_name(entry.at("dtype").get<std::string>())));
      if (static_cast<size_t>(t.numel() * t.element_size()) != size) {
        throw FormatError(FormatErrorKind::kBadHeader, "tensor size mismatch");
      }
      std::memcpy(t.data_ptr(), bytes.data() + base + offset, size);
      ckpt.tensors.emplace_back(entry.at("name").get<std::string>(), t);
    }
    for (const auto& entry : header.at("blobs")) {
      const auto offset = entry.at("offset").get<size_t>();
      const auto size = entry.at("bytes").get<size_t>();
      if (offset > data_size || size > data_size - offset) {
        throw FormatError(FormatErrorKind::kTruncated, entry.at("name").get<std::string>());
      }
      ckpt.blobs[entry.at("name").get<std::string>()] = bytes.substr(base + offset, size);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(FormatErrorKind::kBadHeader, e.what());
  }
  return ckpt;
}

void put_module(Checkpoint& ckpt, const std::string& prefix, const torch::nn::Module& module) {
  for (const auto& p : module.named_parameters()) {
    ckpt.tensors.emplace_back(prefix + "." + p.key(), p.value().detach().clone());
  }
  for (const auto& b : module.named_buffers()) {
    ckpt.tensors.emplace_back(prefix + "." + b.key(), b.value().detach().clone());
  }
}

void load_module(const Checkpoint& ckpt, const std::string& prefix, torch::nn::Module& module) {
  torch::NoGradGuard no_grad;
  auto copy = [&](const std::string& name, torch::Tensor& target) {
    const auto* stored = ckpt.find(prefix + "." + name);
    if (stored == nullptr) {
      throw FormatError(FormatErrorKind::kBadHeader, "checkpoint lacks " + prefix + "." + name);
    }
    if (stored->sizes() != target.sizes()) {
      throw FormatError(FormatErrorKind::kBadHeader, "shape mismatch for " + prefix + "." + name);
    }
    target.copy_(*stored);
  };
  for (auto& p : module.named_parameters()) copy(p.key(), p.value());
  for (auto& b : module.named_buffers()) copy(b.key(), b.value());
}

std::string serialize_optimizer(torch::optim::Optimizer& optimizer) {
  std::ostringstream out;
  torch::serialize::OutputArchive archive;
  optimizer.save(archive);
  archive.save_to(out);
  return out.str();
}

void restore_optimizer(torch::optim::Optimizer& optimizer, const std::string& blob) {
  std::istringstream in(blob);
  torch::serialize::InputArchive archive;
  archive.load_from(in);
  optimizer.load(archive);
}

}  // namespace scmp
