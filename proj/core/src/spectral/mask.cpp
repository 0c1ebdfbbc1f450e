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

#include "specsem/spectral/mask.hpp"

#include <cmath>
#include <string>

#include "specsem/errors.hpp"

namespace specsem::spectral {

HighPassMask::HighPassMask(std::size_t height, std::size_t width, double radius)
    : height_(height), width_(width), radius_(radius),
      bitmap_(height * width, 1) {
  if (!(radius >= 0.0)) throw DomainError("mask radius must be non-negative");
  const double r2 = radius * radius;
  const auto cy = static_cast<double>(center_y());
  const auto cx = static_cast<double>(center_x());
  for (std::size_t u = 0; u < height; ++u) {
    const double dy = static_cast<double>(u) - cy;
    for (std::size_t v = 0; v < width; ++v) {
      const double dx = static_cast<double>(v) - cx;
      if (dy * dy + dx * dx <= r2) {
        bitmap_[u * width + v] = 0;
        ++masked_;
      }
    }
  }
}

double HighPassMask::mask_fraction() const {
  return static_cast<double>(masked_) / static_cast<double>(height_ * width_);
}

std::size_t masked_count(std::size_t height, std::size_t width, double radius) {
  if (!(radius >= 0.0)) throw DomainError("mask radius must be non-negative");
  const double r2 = radius * radius;
  const auto cy = static_cast<long long>(height / 2);
  const auto cx = static_cast<long long>(width / 2);
  std::size_t total = 0;
  for (long long u = 0; u < static_cast<long long>(height); ++u) {
    const double dy = static_cast<double>(u - cy);
    const double room = r2 - dy * dy;
    if (room < 0.0) continue;
    // Largest k with k^2 <= room.
    auto k = static_cast<long long>(std::sqrt(room));
    while (static_cast<double>((k + 1) * (k + 1)) <= room) ++k;
    while (k > 0 && static_cast<double>(k * k) > room) --k;
    const long long lo = std::max(0LL, cx - k);
    const long long hi = std::min(static_cast<long long>(width) - 1, cx + k);
    if (hi >= lo) total += static_cast<std::size_t>(hi - lo + 1);
  }
  return total;
}

FrequencySpectrum apply_mask(const FrequencySpectrum& spectrum,
                             const HighPassMask& mask) {
  if (spectrum.height != mask.height() || spectrum.width != mask.width()) {
    throw DimensionError("apply_mask: spectrum is " +
                         std::to_string(spectrum.height) + "x" +
                         std::to_string(spectrum.width) + ", mask is " +
                         std::to_string(mask.height()) + "x" +
                         std::to_string(mask.width()));
  }
  FrequencySpectrum out = spectrum;
  const auto& bits = mask.bitmap();
  for (std::size_t i = 0; i < out.bins.size(); ++i) {
    if (bits[i] == 0) out.bins[i] = Complex(0.0, 0.0);
  }
  return out;
}

}  // namespace specsem::spectral
