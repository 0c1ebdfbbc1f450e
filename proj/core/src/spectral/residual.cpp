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

#include "specsem/spectral/residual.hpp"

#include <algorithm>
#include <cmath>

#include "specsem/errors.hpp"

namespace specsem::spectral {

double radius_for_size(double reference_radius, std::size_t size) {
  return reference_radius * static_cast<double>(size) /
         static_cast<double>(kReferenceSize);
}

std::size_t working_extent(std::size_t extent) {
  return next_power_of_two(extent);
}

HighPassMask working_mask(std::size_t height, std::size_t width, double radius) {
  const std::size_t ph = working_extent(height), pw = working_extent(width);
  const double scaled =
      radius * static_cast<double>(ph) / static_cast<double>(height);
  return HighPassMask(ph, pw, scaled);
}

namespace {

// Mean-removed copy of one channel embedded top-left in a zero grid of the
// working extents. Removing the mean first keeps the zero padding from
// introducing a step at the frame border; DC is masked for every r >= 0, so
// the subtraction does not change what the filter passes on power-of-two
// frames.
std::vector<double> padded_channel(std::span<const double> plane,
                                   std::size_t h, std::size_t w,
                                   std::size_t ph, std::size_t pw) {
  double mean = 0.0;
  for (double v : plane) mean += v;
  mean /= static_cast<double>(plane.size());
  std::vector<double> grid(ph * pw, 0.0);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) grid[y * pw + x] = plane[y * w + x] - mean;
  return grid;
}

}  // namespace

SpectralResidual extract_residual(const Image& frame, double radius) {
  if (frame.channels == 0 || frame.height == 0 || frame.width == 0) {
    throw DimensionError("extract_residual: empty frame");
  }
  const std::size_t h = frame.height, w = frame.width;
  const HighPassMask mask = working_mask(h, w, radius);
  const std::size_t ph = mask.height(), pw = mask.width();
  SpectralResidual out(Image(frame.channels, h, w));
  for (std::size_t c = 0; c < frame.channels; ++c) {
    const auto grid = padded_channel(frame.channel(c), h, w, ph, pw);
    const auto filtered =
        ifftshift(apply_mask(fftshift(fft2(grid, ph, pw)), mask));
    const auto spatial = ifft2_real(filtered);
    auto dst = out.channel(c);
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x) dst[y * w + x] = spatial[y * pw + x];
  }
  return out;
}

Image log_magnitude_spectrum(const Image& frame) {
  const std::size_t ph = working_extent(frame.height);
  const std::size_t pw = working_extent(frame.width);
  Image out(frame.channels, ph, pw);
  for (std::size_t c = 0; c < frame.channels; ++c) {
    const auto grid =
        padded_channel(frame.channel(c), frame.height, frame.width, ph, pw);
    const auto spec = fftshift(fft2(grid, ph, pw));
    auto dst = out.channel(c);
    for (std::size_t i = 0; i < dst.size(); ++i)
      dst[i] = std::log1p(std::abs(spec.bins[i]));
  }
  return out;
}

numerics::Tensor standardize_channels(const Image& image) {
  std::vector<double> data(image.data.size());
  const std::size_t n = image.plane_size();
  for (std::size_t c = 0; c < image.channels; ++c) {
    const auto src = image.channel(c);
    double mean = 0.0;
    for (double v : src) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : src) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double inv_std = 1.0 / std::sqrt(std::max(var, 1e-8));
    for (std::size_t i = 0; i < n; ++i)
      data[c * n + i] = (src[i] - mean) * inv_std;
  }
  return numerics::Tensor({image.channels, image.height, image.width},
                          std::move(data));
}

numerics::Tensor normalize_residual(const SpectralResidual& residual) {
  return standardize_channels(residual);
}

}  // namespace specsem::spectral
