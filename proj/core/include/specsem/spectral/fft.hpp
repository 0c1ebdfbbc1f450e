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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace specsem::spectral {

using Complex = std::complex<double>;

// One channel of a 2D spectrum. `centered` records whether the DC bin has
// been moved to (H/2, W/2) by fftshift.
struct FrequencySpectrum {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<Complex> bins;  // row-major
  bool centered = false;

  Complex& at(std::size_t u, std::size_t v) { return bins[u * width + v]; }
  const Complex& at(std::size_t u, std::size_t v) const {
    return bins[u * width + v];
  }
};

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

// In-place radix-2 transform of a power-of-two length sequence. The forward
// transform uses e^{-2 pi i k n / N}; inverse=true flips the sign and does not
// scale.
void fft_inplace(std::span<Complex> values, bool inverse);

// Unnormalised forward 2D DFT of a real grid (row-major, height x width).
// Both extents must be powers of two; other sizes raise SizeError.
FrequencySpectrum fft2(std::span<const double> grid, std::size_t height,
                       std::size_t width);

// Inverse 2D DFT scaled by 1/(H W). The imaginary part is dropped after
// checking it is rounding noise; a spectrum that is not Hermitian raises
// NumericError.
std::vector<double> ifft2_real(const FrequencySpectrum& spectrum);

// Cyclic shift by (floor(H/2), floor(W/2)); ifftshift is its exact inverse.
FrequencySpectrum fftshift(const FrequencySpectrum& spectrum);
FrequencySpectrum ifftshift(const FrequencySpectrum& spectrum);

}  // namespace specsem::spectral
