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

#include <cstddef>
#include <span>
#include <vector>

namespace specsem {

// Planar float64 image: data[c][y][x]. Colour frames carry 3 channels with
// intensities in [0, 1].
struct Image {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;

  Image() = default;
  Image(std::size_t channels, std::size_t height, std::size_t width,
        double fill = 0.0)
      : channels(channels), height(height), width(width),
        data(channels * height * width, fill) {}

  std::size_t plane_size() const { return height * width; }

  std::span<double> channel(std::size_t c) {
    return {data.data() + c * plane_size(), plane_size()};
  }
  std::span<const double> channel(std::size_t c) const {
    return {data.data() + c * plane_size(), plane_size()};
  }

  double& at(std::size_t c, std::size_t y, std::size_t x) {
    return data[(c * height + y) * width + x];
  }
  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return data[(c * height + y) * width + x];
  }

  bool same_extents(const Image& other) const {
    return channels == other.channels && height == other.height &&
           width == other.width;
  }
};

// Rounds every value to the nearest 8-bit level (after clamping to [0, 1]),
// i.e. exactly what a P6 write followed by a read yields.
void quantize_8bit(Image& image);

}  // namespace specsem
