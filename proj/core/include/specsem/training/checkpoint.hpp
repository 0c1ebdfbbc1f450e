/*
 * Copyright 2026 The SpecSem Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "specsem/training/detector.hpp"

namespace specsem::training {

// Layout (little endian):
//   "SSNW" | u32 version | u32 config length | config JSON | u64 config hash |
//   u32 tensor count | per tensor: u32 name length, name, u32 rank,
//   u64 dims[rank], f32 values[numel]
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string encode_checkpoint(const Detector& detector);
// Throws ParseError on malformed bytes and ModelError on a hash mismatch
// (stored vs recomputed, or vs `expected_hash` when given) or on missing,
// extra or mis-shaped tensors.
Detector decode_checkpoint(const std::string& bytes,
                           std::optional<std::uint64_t> expected_hash = std::nullopt);

void save_checkpoint(const std::filesystem::path& path, const Detector& detector);
Detector load_checkpoint(const std::filesystem::path& path,
                         std::optional<std::uint64_t> expected_hash = std::nullopt);

}  // namespace specsem::training
