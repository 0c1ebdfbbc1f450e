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

#include "specsem/io/raw_grid.hpp"

#include <fstream>

#include "specsem/errors.hpp"
#include "specsem/io/binary.hpp"

namespace specsem::io {

namespace {
constexpr char kMagic[4] = {'S', 'S', 'R', 'G'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_raw_grid(const std::filesystem::path& path, const Image& image) {
  std::string out(kMagic, 4);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(image.channels));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(image.height));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(image.width));
  for (double v : image.data) put_le<double>(out, v);
  write_file(path, out);
}

Image read_raw_grid(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  ByteReader in(bytes, path.string());
  if (in.get_bytes(4) != std::string(kMagic, 4)) {
    throw ParseError(path.string() + ": bad raw-grid magic at byte offset 0");
  }
  const auto version = in.get_le<std::uint32_t>();
  if (version != kVersion) {
    throw ParseError(path.string() + ": unsupported raw-grid version " +
                     std::to_string(version));
  }
  const auto channels = in.get_le<std::uint32_t>();
  const auto height = in.get_le<std::uint32_t>();
  const auto width = in.get_le<std::uint32_t>();
  Image image(channels, height, width);
  for (auto& v : image.data) v = in.get_le<double>();
  if (!in.at_end()) {
    throw ParseError(path.string() + ": trailing bytes at offset " +
                     std::to_string(in.offset()));
  }
  return image;
}

bool is_raw_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::equal(magic, magic + 4, kMagic);
}

}  // namespace specsem::io
