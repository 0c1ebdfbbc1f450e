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
#include <string>

#include "specsem/image.hpp"

namespace specsem::io {

// Binary P6 reader. Accepts maxval up to 65535 (two bytes per sample, big
// endian above 255) and '#' comments in the header. Values are scaled to
// [0, 1]. Throws ParseError naming the byte offset of the first problem.
Image decode_ppm(const std::string& bytes);
Image read_ppm(const std::filesystem::path& path);

// Writes an 8-bit P6 file; values are clamped to [0, 1] and rounded.
std::string encode_ppm(const Image& image);
void write_ppm(const std::filesystem::path& path, const Image& image);

// Affinely maps [min, max] over all channels to [0, 1] for viewing. A
// constant image maps to mid grey.
Image rescale_for_view(const Image& image);

// Expands a single-channel image to three identical channels.
Image gray_to_rgb(const Image& image);

}  // namespace specsem::io
