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

#include "specsem/io/ppm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "specsem/errors.hpp"
#include "specsem/io/binary.hpp"

namespace specsem::io {

namespace {

class HeaderScanner {
 public:
  explicit HeaderScanner(const std::string& bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t read_uint(const char* field) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < bytes_.size() &&
           std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      if (value > 1u << 20) fail(start, std::string(field) + " too large");
      ++pos_;
    }
    if (pos_ == start) fail(start, std::string("expected ") + field);
    return value;
  }

  [[noreturn]] void fail(std::size_t offset, const std::string& what) const {
    throw ParseError("malformed PPM at byte offset " + std::to_string(offset) +
                     ": " + what);
  }

  std::size_t pos_ = 0;
  const std::string& bytes_;
};

}  // namespace

Image decode_ppm(const std::string& bytes) {
  HeaderScanner scan(bytes);
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    scan.fail(0, "missing P6 magic");
  }
  scan.pos_ = 2;
  const std::size_t width = scan.read_uint("width");
  const std::size_t height = scan.read_uint("height");
  const std::size_t maxval_offset = scan.pos_;
  const std::size_t maxval = scan.read_uint("maxval");
  if (width == 0 || height == 0) scan.fail(maxval_offset, "zero extent");
  if (maxval == 0 || maxval > 65535) scan.fail(maxval_offset, "maxval out of range");
  if (scan.pos_ >= bytes.size() ||
      !std::isspace(static_cast<unsigned char>(bytes[scan.pos_]))) {
    scan.fail(scan.pos_, "expected single whitespace after maxval");
  }
  ++scan.pos_;
  const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
  const std::size_t need = width * height * 3 * sample_bytes;
  if (bytes.size() - scan.pos_ < need) {
    scan.fail(bytes.size(), "pixel data truncated (need " +
                                std::to_string(need) + " bytes from offset " +
                                std::to_string(scan.pos_) + ")");
  }
  Image image(3, height, width);
  const auto* px = reinterpret_cast<const unsigned char*>(bytes.data() + scan.pos_);
  const double denom = static_cast<double>(maxval);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      for (std::size_t c = 0; c < 3; ++c) {
        const std::size_t idx = ((y * width + x) * 3 + c) * sample_bytes;
        std::size_t level = px[idx];
        if (sample_bytes == 2) level = (level << 8) | px[idx + 1];
        if (level > maxval) {
          scan.fail(scan.pos_ + idx, "sample exceeds maxval");
        }
        image.at(c, y, x) = static_cast<double>(level) / denom;
      }
    }
  }
  return image;
}

Image read_ppm(const std::filesystem::path& path) {
  try {
    return decode_ppm(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string encode_ppm(const Image& image) {
  if (image.channels != 3 && image.channels != 1) {
    throw DimensionError("PPM output needs 1 or 3 channels");
  }
  const Image& rgb = image;
  std::string out = "P6\n" + std::to_string(rgb.width) + " " +
                    std::to_string(rgb.height) + "\n255\n";
  out.reserve(out.size() + rgb.width * rgb.height * 3);
  for (std::size_t y = 0; y < rgb.height; ++y) {
    for (std::size_t x = 0; x < rgb.width; ++x) {
      for (std::size_t c = 0; c < 3; ++c) {
        const std::size_t src = rgb.channels == 1 ? 0 : c;
        const long level =
            std::lround(std::clamp(rgb.at(src, y, x), 0.0, 1.0) * 255.0);
        out.push_back(static_cast<char>(static_cast<unsigned char>(level)));
      }
    }
  }
  return out;
}

void write_ppm(const std::filesystem::path& path, const Image& image) {
  write_file(path, encode_ppm(image));
}

Image rescale_for_view(const Image& image) {
  Image out = image;
  if (image.data.empty()) return out;
  const auto [lo, hi] = std::minmax_element(image.data.begin(), image.data.end());
  const double span = *hi - *lo;
  for (auto& v : out.data) v = span > 0.0 ? (v - *lo) / span : 0.5;
  return out;
}

Image gray_to_rgb(const Image& image) {
  Image out(3, image.height, image.width);
  for (std::size_t c = 0; c < 3; ++c) {
    auto dst = out.channel(c);
    auto src = image.channel(0);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

}  // namespace specsem::io
