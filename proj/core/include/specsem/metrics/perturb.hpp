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

#include <array>
#include <string>

#include "specsem/image.hpp"

namespace specsem::metrics {

// Separable Gaussian blur with kernel radius ceil(3 sigma), normalised
// weights and mirror padding (edge pixel not repeated). sigma = 0 returns an
// exact copy; negative sigma throws DomainError.
Image perturb_blur(const Image& frame, double sigma);

// Blockwise 8x8 DCT quantisation in the style of baseline JPEG, applied to
// every channel with the standard luminance table scaled by quality q in
// [1, 100]. Extents that are not multiples of 8 are mirror-padded and the
// result cropped back. Output is decoded back to 8-bit levels.
Image perturb_compress(const Image& frame, int quality);

using Block8 = std::array<double, 64>;
// Orthonormal 2D DCT-II of a row-major 8x8 block and its inverse.
Block8 dct8(const Block8& block);
Block8 idct8(const Block8& coeffs);
// Quantisation steps for a quality level (each in [1, 255]).
Block8 quantization_table(int quality);

struct Perturbation {
  enum class Kind { kNone, kBlur, kCompress } kind = Kind::kNone;
  double value = 0.0;  // sigma or quality

  Image apply(const Image& frame) const;
  std::string to_string() const;
};

// "none", "blur:<sigma>" or "compress:<quality>"; throws UsageError.
Perturbation parse_perturbation(const std::string& text);

}  // namespace specsem::metrics
