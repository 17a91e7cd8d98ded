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

#ifndef SCMP_HASH_H_
#define SCMP_HASH_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

namespace scmp {

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes,
                      std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t fnv1a64(std::string_view text);

// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

// Hash of the canonical (sorted-key, compact) JSON serialisation.
std::string config_hash(const nlohmann::json& config);

}  // namespace scmp

#endif  // SCMP_HASH_H_
