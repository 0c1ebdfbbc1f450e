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
#include <cstdint>
#include <vector>

#include "specsem/spectral/fft.hpp"

namespace specsem::spectral {

// Binary high-pass mask on a centred spectrum: bins within Euclidean distance
// `radius` of (floor(H/2), floor(W/2)), boundary included, are zeroed; all
// other bins pass.
class HighPassMask {
 public:
  HighPassMask(std::size_t height, std::size_t width, double radius);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  double radius() const { return radius_; }
  std::size_t center_y() const { return height_ / 2; }
  std::size_t center_x() const { return width_ / 2; }

  // 1 where the bin passes, 0 where it is masked.
  std::uint8_t at(std::size_t u, std::size_t v) const {
    return bitmap_[u * width_ + v];
  }
  const std::vector<std::uint8_t>& bitmap() const { return bitmap_; }

  std::size_t masked_count() const { return masked_; }
  // Exact area fraction masked_count / (H W).
  double mask_fraction() const;

 private:
  std::size_t height_;
  std::size_t width_;
  double radius_;
  std::vector<std::uint8_t> bitmap_;
  std::size_t masked_ = 0;
};

// Number of grid bins inside the closed disc, counted row by row.
std::size_t masked_count(std::size_t height, std::size_t width, double radius);

FrequencySpectrum apply_mask(const FrequencySpectrum& spectrum,
                             const HighPassMask& mask);

}  // namespace specsem::spectral
