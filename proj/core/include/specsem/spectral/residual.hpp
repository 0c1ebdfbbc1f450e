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

#include "specsem/image.hpp"
#include "specsem/numerics/tensor.hpp"
#include "specsem/spectral/fft.hpp"
#include "specsem/spectral/mask.hpp"

namespace specsem::spectral {

// High-frequency residual of a frame: same layout as the frame, unbounded
// real values.
struct SpectralResidual : Image {
  SpectralResidual() = default;
  explicit SpectralResidual(Image image) : Image(std::move(image)) {}
};

// Reference grid on which radii and artifact frequencies are quoted.
inline constexpr std::size_t kReferenceSize = 224;
inline constexpr double kDefaultRadius = 32.0;

// Converts a radius quoted on the 224-pixel reference grid to bins of a
// frame with the given extent.
double radius_for_size(double reference_radius, std::size_t size);

// FFT grid used for a frame extent: the extent itself when it is a power of
// two, else the next power of two (the frame is zero-padded).
std::size_t working_extent(std::size_t extent);

// Mask actually applied by extract_residual for a frame of the given size
// and radius (in bins of that frame).
HighPassMask working_mask(std::size_t height, std::size_t width, double radius);

// Per channel: fft2 -> fftshift -> mask -> ifftshift -> real inverse.
// `radius` is in bins of the frame grid. Frames whose extents are not powers
// of two are zero-padded to the next power of two, filtered with the radius
// scaled by padded/original, and cropped back.
SpectralResidual extract_residual(const Image& frame, double radius);

// Log-magnitude of the centred spectrum per channel (for inspection).
Image log_magnitude_spectrum(const Image& frame);

// Per-channel standardisation to zero mean and unit variance with a
// variance floor of 1e-8; returns a [C, H, W] tensor.
numerics::Tensor standardize_channels(const Image& image);
numerics::Tensor normalize_residual(const SpectralResidual& residual);

}  // namespace specsem::spectral
