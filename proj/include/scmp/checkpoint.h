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

#ifndef SCMP_CHECKPOINT_H_
#define SCMP_CHECKPOINT_H_

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>
#include <torch/torch.h>

namespace scmp {

// Self-describing weight container.
//
//   bytes 0-3  magic "SCKP"
//   byte  4    version (1)
//   bytes 5-12 header length, u64 little-endian
//   header     JSON: {"meta": ..., "tensors": [{name, dtype, shape, offset,
//              bytes}], "blobs": [{name, offset, bytes}]}
//   data       raw little-endian tensor payloads and opaque blobs
struct Checkpoint {
  nlohmann::json meta = nlohmann::json::object();
  std::vector<std::pair<std::string, torch::Tensor>> tensors;
  std::map<std::string, std::string> blobs;

  const torch::Tensor* find(const std::string& name) const;
};

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
// Throws FormatError on a malformed file, DataError if it cannot be read.
Checkpoint read_checkpoint(const std::filesystem::path& path);

// Parameters and buffers of `module` as "<prefix>.<name>".
void put_module(Checkpoint& ckpt, const std::string& prefix,
                const torch::nn::Module& module);
// Copies stored values into `module`; every parameter must be present with
// a matching shape (FormatError otherwise).
void load_module(const Checkpoint& ckpt, const std::string& prefix,
                 torch::nn::Module& module);

std::string serialize_optimizer(torch::optim::Optimizer& optimizer);
void restore_optimizer(torch::optim::Optimizer& optimizer, const std::string& blob);

}  // namespace scmp

#endif  // SCMP_CHECKPOINT_H_
