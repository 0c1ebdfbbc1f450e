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

#include "specsem/spectral/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "specsem/errors.hpp"

namespace specsem::spectral {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_inplace(std::span<Complex> values, bool inverse) {
  const std::size_t n = values.size();
  if (!is_power_of_two(n)) {
    throw SizeError("FFT length " + std::to_string(n) +
                    " is not a power of two; pad or crop the input");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(values[i], values[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<Complex> twiddle;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    twiddle.resize(half);
    // Direct evaluation of each twiddle keeps errors at the 1e-16 level.
    for (std::size_t k = 0; k < half; ++k) {
      const double angle = sign * 2.0 * std::numbers::pi *
                           static_cast<double>(k) / static_cast<double>(len);
      twiddle[k] = {std::cos(angle), std::sin(angle)};
    }
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex even = values[start + k];
        const Complex odd = values[start + k + half] * twiddle[k];
        values[start + k] = even + odd;
        values[start + k + half] = even - odd;
      }
    }
  }
}

namespace {

void transform_2d(FrequencySpectrum& s, bool inverse) {
  std::vector<Complex> column(s.height);
  for (std::size_t u = 0; u < s.height; ++u) {
    fft_inplace(std::span<Complex>(s.bins.data() + u * s.width, s.width), inverse);
  }
  for (std::size_t v = 0; v < s.width; ++v) {
    for (std::size_t u = 0; u < s.height; ++u) column[u] = s.at(u, v);
    fft_inplace(column, inverse);
    for (std::size_t u = 0; u < s.height; ++u) s.at(u, v) = column[u];
  }
}

FrequencySpectrum cyclic_shift(const FrequencySpectrum& in, std::size_t dy,
                               std::size_t dx) {
  FrequencySpectrum out = in;
  for (std::size_t u = 0; u < in.height; ++u) {
    const std::size_t tu = (u + dy) % in.height;
    for (std::size_t v = 0; v < in.width; ++v) {
      out.at(tu, (v + dx) % in.width) = in.at(u, v);
    }
  }
  return out;
}

}  // namespace

FrequencySpectrum fft2(std::span<const double> grid, std::size_t height,
                       std::size_t width) {
  if (!is_power_of_two(height) || !is_power_of_two(width)) {
    throw SizeError("fft2 needs power-of-two extents, got " +
                    std::to_string(height) + "x" + std::to_string(width) +
                    "; resize or zero-pad the frame (extract_residual pads "
                    "automatically)");
  }
  if (grid.size() != height * width) {
    throw DimensionError("fft2: grid has " + std::to_string(grid.size()) +
                         " values for " + std::to_string(height) + "x" +
                         std::to_string(width));
  }
  FrequencySpectrum s;
  s.height = height;
  s.width = width;
  s.bins.assign(grid.begin(), grid.end());
  transform_2d(s, false);
  return s;
}

std::vector<double> ifft2_real(const FrequencySpectrum& spectrum) {
  FrequencySpectrum s = spectrum;
  transform_2d(s, true);
  const double inv = 1.0 / static_cast<double>(s.height * s.width);
  std::vector<double> out(s.bins.size());
  double max_re = 0.0, max_im = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = s.bins[i].real() * inv;
    max_re = std::max(max_re, std::abs(out[i]));
    max_im = std::max(max_im, std::abs(s.bins[i].imag() * inv));
  }
  if (max_im > 1e-8 * (1.0 + max_re)) {
    throw NumericError("ifft2_real: spectrum is not Hermitian (max |Im| = " +
                       std::to_string(max_im) + ")");
  }
  return out;
}

FrequencySpectrum fftshift(const FrequencySpectrum& spectrum) {
  FrequencySpectrum out =
      cyclic_shift(spectrum, spectrum.height / 2, spectrum.width / 2);
  out.centered = true;
  return out;
}

FrequencySpectrum ifftshift(const FrequencySpectrum& spectrum) {
  FrequencySpectrum out =
      cyclic_shift(spectrum, spectrum.height - spectrum.height / 2,
                   spectrum.width - spectrum.width / 2);
  out.centered = false;
  return out;
}

}  // namespace specsem::spectral
