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

#include <filesystem>

#include "specsem/image.hpp"

namespace specsem::io {

// Raw float64 grid file:
//   bytes 0..3   magic "SSRG"
//   u32          version (1)
//   u32 x3       channels, height, width
//   f64[...]     planar values, little endian
void write_raw_grid(const std::filesystem::path& path, const Image& image);
Image read_raw_grid(const std::filesystem::path& path);

// True when the file starts with the raw-grid magic.
bool is_raw_grid(const std::filesystem::path& path);

}  // namespace specsem::io
