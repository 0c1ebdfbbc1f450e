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

#include "specsem/metrics/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "specsem/errors.hpp"

namespace specsem::metrics {

namespace {

// Mirror index into [0, n) without repeating the edge sample.
std::size_t reflect(long i, std::size_t n) {
  if (n == 1) return 0;
  const long period = 2 * (static_cast<long>(n) - 1);
  long m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<long>(n)) m = period - m;
  return static_cast<std::size_t>(m);
}

constexpr int kLuminance[64] = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

const std::array<double, 64>& dct_basis() {
  // basis[k * 8 + n] = c_k cos((2n + 1) k pi / 16)
  static const std::array<double, 64> basis = [] {
    std::array<double, 64> b{};
    for (int k = 0; k < 8; ++k) {
      const double c = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int n = 0; n < 8; ++n)
        b[k * 8 + n] = c * std::cos((2 * n + 1) * k * std::numbers::pi / 16.0);
    }
    return b;
  }();
  return basis;
}

}  // namespace

Image perturb_blur(const Image& frame, double sigma) {
  if (!(sigma >= 0.0)) throw DomainError("blur sigma must be >= 0");
  if (sigma == 0.0) return frame;
  const auto radius = static_cast<long>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (long k = -radius; k <= radius; ++k) {
    const double w = std::exp(-0.5 * static_cast<double>(k * k) / (sigma * sigma));
    kernel[static_cast<std::size_t>(k + radius)] = w;
    total += w;
  }
  for (double& w : kernel) w /= total;

  Image tmp(frame.channels, frame.height, frame.width);
  Image out(frame.channels, frame.height, frame.width);
  for (std::size_t c = 0; c < frame.channels; ++c) {
    for (std::size_t y = 0; y < frame.height; ++y)
      for (std::size_t x = 0; x < frame.width; ++x) {
        double acc = 0.0;
        for (long k = -radius; k <= radius; ++k)
          acc += kernel[static_cast<std::size_t>(k + radius)] *
                 frame.at(c, y, reflect(static_cast<long>(x) + k, frame.width));
        tmp.at(c, y, x) = acc;
      }
    for (std::size_t y = 0; y < frame.height; ++y)
      for (std::size_t x = 0; x < frame.width; ++x) {
        double acc = 0.0;
        for (long k = -radius; k <= radius; ++k)
          acc += kernel[static_cast<std::size_t>(k + radius)] *
                 tmp.at(c, reflect(static_cast<long>(y) + k, frame.height), x);
        out.at(c, y, x) = acc;
      }
  }
  return out;
}

Block8 dct8(const Block8& block) {
  const auto& b = dct_basis();
  Block8 rows{}, out{};
  for (int y = 0; y < 8; ++y)
    for (int k = 0; k < 8; ++k) {
      double acc = 0.0;
      for (int n = 0; n < 8; ++n) acc += b[k * 8 + n] * block[y * 8 + n];
      rows[y * 8 + k] = acc;
    }
  for (int k = 0; k < 8; ++k)
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int n = 0; n < 8; ++n) acc += b[k * 8 + n] * rows[n * 8 + x];
      out[k * 8 + x] = acc;
    }
  return out;
}

Block8 idct8(const Block8& coeffs) {
  const auto& b = dct_basis();
  Block8 cols{}, out{};
  for (int n = 0; n < 8; ++n)
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int k = 0; k < 8; ++k) acc += b[k * 8 + n] * coeffs[k * 8 + x];
      cols[n * 8 + x] = acc;
    }
  for (int y = 0; y < 8; ++y)
    for (int n = 0; n < 8; ++n) {
      double acc = 0.0;
      for (int k = 0; k < 8; ++k) acc += b[k * 8 + n] * cols[y * 8 + k];
      out[y * 8 + n] = acc;
    }
  return out;
}

Block8 quantization_table(int quality) {
  if (quality < 1 || quality > 100) throw DomainError("quality must be in [1, 100]");
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  Block8 table{};
  for (int i = 0; i < 64; ++i)
    table[i] = std::clamp((kLuminance[i] * scale + 50) / 100, 1, 255);
  return table;
}

Image perturb_compress(const Image& frame, int quality) {
  const Block8 table = quantization_table(quality);
  const std::size_t ph = (frame.height + 7) / 8 * 8;
  const std::size_t pw = (frame.width + 7) / 8 * 8;
  Image out(frame.channels, frame.height, frame.width);
  for (std::size_t c = 0; c < frame.channels; ++c) {
    for (std::size_t by = 0; by < ph; by += 8)
      for (std::size_t bx = 0; bx < pw; bx += 8) {
        Block8 block{};
        for (std::size_t y = 0; y < 8; ++y)
          for (std::size_t x = 0; x < 8; ++x)
            block[y * 8 + x] =
                frame.at(c, reflect(static_cast<long>(by + y), frame.height),
                         reflect(static_cast<long>(bx + x), frame.width)) * 255.0 - 128.0;
        Block8 coeffs = dct8(block);
        for (int i = 0; i < 64; ++i) coeffs[i] = std::round(coeffs[i] / table[i]) * table[i];
        const Block8 rec = idct8(coeffs);
        for (std::size_t y = 0; y < 8 && by + y < frame.height; ++y)
          for (std::size_t x = 0; x < 8 && bx + x < frame.width; ++x)
            out.at(c, by + y, bx + x) = std::clamp((rec[y * 8 + x] + 128.0) / 255.0, 0.0, 1.0);
      }
  }
  quantize_8bit(out);
  return out;
}

Image Perturbation::apply(const Image& frame) const {
  switch (kind) {
    case Kind::kNone: return frame;
    case Kind::kBlur: return perturb_blur(frame, value);
    case Kind::kCompress: return perturb_compress(frame, static_cast<int>(value));
  }
  return frame;
}

std::string Perturbation::to_string() const {
  char buf[64];
  switch (kind) {
    case Kind::kNone: return "none";
    case Kind::kBlur: std::snprintf(buf, sizeof buf, "blur:%g", value); return buf;
    case Kind::kCompress: std::snprintf(buf, sizeof buf, "compress:%d", static_cast<int>(value)); return buf;
  }
  return "none";
}

Perturbation parse_perturbation(const std::string& text) {
  if (text.empty() || text == "none") return {};
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw UsageError("perturbation '" + text + "' must look like blur:<sigma> or compress:<quality>");
  }
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(arg, &used);
    if (used != arg.size()) throw std::invalid_argument(arg);
  } catch (const std::exception&) {
    throw UsageError("perturbation '" + text + "' has a non-numeric argument");
  }
  Perturbation p;
  p.value = value;
  if (kind == "blur") {
    if (value < 0.0) throw UsageError("blur sigma must be >= 0");
    p.kind = Perturbation::Kind::kBlur;
  } else if (kind == "compress") {
    if (value < 1.0 || value > 100.0 || value != std::floor(value)) {
      throw UsageError("compress quality must be an integer in [1, 100]");
    }
    p.kind = Perturbation::Kind::kCompress;
  } else {
    throw UsageError("unknown perturbation '" + kind + "'");
  }
  return p;
}

}  // namespace specsem::metrics
