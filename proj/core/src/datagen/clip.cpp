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

#include "specsem/datagen/clip.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "specsem/errors.hpp"
#include "specsem/rng.hpp"
#include "specsem/spectral/fft.hpp"

namespace specsem::datagen {

namespace {

using spectral::Complex;

// Independent random streams derived from a clip seed.
constexpr std::uint64_t kSceneStream = 0;
constexpr std::uint64_t kArtifactStream = 1;
constexpr std::uint64_t kSparkStream = 3;

constexpr double kTargetMean = 0.5;
constexpr double kTargetStd = 0.15;

struct ShapeSpec {
  double cy, cx, radius;
  double color[3];
};

// Geometry is in normalised coordinates so one scene renders at any size.
struct Scene {
  std::size_t content_class = 0;
  double vy = 0.0, vx = 0.0;  // frame fractions per frame
  std::vector<double> jitter_y, jitter_x;
  double base[3] = {};
  double grad_y[3] = {}, grad_x[3] = {};
  double texture_gain[3] = {};
  double texture_strength = 0.0;
  std::uint64_t texture_seed = 0;
  std::vector<ShapeSpec> shapes;
};

Scene sample_scene(std::uint64_t seed, std::size_t frames) {
  Rng rng(seed, kSceneStream);
  Scene s;
  s.content_class = rng.below(kContentClasses);
  s.vy = rng.uniform(-1.0, 1.0) / 64.0;
  s.vx = rng.uniform(-1.0, 1.0) / 64.0;
  for (std::size_t t = 0; t < frames; ++t) {
    s.jitter_y.push_back(rng.uniform(-0.15, 0.15) / 64.0);
    s.jitter_x.push_back(rng.uniform(-0.15, 0.15) / 64.0);
  }
  for (int c = 0; c < 3; ++c) {
    s.base[c] = rng.uniform(0.3, 0.7);
    s.grad_y[c] = rng.uniform(-0.3, 0.3);
    s.grad_x[c] = rng.uniform(-0.3, 0.3);
    s.texture_gain[c] = rng.uniform(0.8, 1.0);
  }
  s.texture_strength = rng.uniform(0.05, 0.08);
  s.texture_seed = rng.next_u64();
  const std::size_t count = 2 + rng.below(3);
  for (std::size_t i = 0; i < count; ++i) {
    ShapeSpec shape{};
    shape.cy = rng.uniform(0.15, 0.85);
    shape.cx = rng.uniform(0.15, 0.85);
    shape.radius = rng.uniform(0.08, 0.2);
    for (double& v : shape.color) v = rng.uniform(0.0, 1.0);
    s.shapes.push_back(shape);
  }
  return s;
}

// Signed distance (pixels) to the outline of a shape of the given kind.
double shape_distance(std::size_t kind, double dy, double dx, double r) {
  switch (kind) {
    case 0: return std::hypot(dy, dx) - r;
    case 1: return std::max(std::abs(dy), std::abs(dx)) - 0.85 * r;
    case 2: return std::abs(std::hypot(dy, dx) - r) - 0.3 * r;
    default: return (std::abs(dy) + std::abs(dx)) / std::numbers::sqrt2 - 0.8 * r;
  }
}

// Power-law texture spectrum (amplitude ~ 1/f, i.e. power ~ 1/f^2) on a
// power-of-two grid, scaled so the spatial texture has unit variance. The
// Nyquist row/column are dropped so that sub-pixel phase ramps keep the
// spectrum Hermitian.
spectral::FrequencySpectrum texture_spectrum(std::uint64_t seed, std::size_t grid) {
  Rng rng(seed);
  std::vector<double> noise(grid * grid);
  for (auto& v : noise) v = rng.normal();
  auto spec = spectral::fft2(noise, grid, grid);
  const auto half = static_cast<long>(grid / 2);
  double power = 0.0;
  for (std::size_t u = 0; u < grid; ++u) {
    const long ky = static_cast<long>(u) < half ? static_cast<long>(u)
                                                : static_cast<long>(u) - static_cast<long>(grid);
    for (std::size_t v = 0; v < grid; ++v) {
      const long kx = static_cast<long>(v) < half ? static_cast<long>(v)
                                                  : static_cast<long>(v) - static_cast<long>(grid);
      Complex& bin = spec.at(u, v);
      if ((ky == 0 && kx == 0) || ky == -half || kx == -half) {
        bin = 0.0;
        continue;
      }
      bin /= std::hypot(static_cast<double>(ky), static_cast<double>(kx));
      power += std::norm(bin);
    }
  }
  // Parseval: spatial variance = power / N^4 for an N x N grid.
  const double n2 = static_cast<double>(grid * grid);
  const double std_dev = std::sqrt(power) / n2;
  for (auto& bin : spec.bins) bin /= std_dev;
  return spec;
}

std::vector<double> shifted_texture(const spectral::FrequencySpectrum& base,
                                    double shift_y, double shift_x) {
  const std::size_t grid = base.height;
  const auto half = static_cast<long>(grid / 2);
  spectral::FrequencySpectrum spec = base;
  for (std::size_t u = 0; u < grid; ++u) {
    const long ky = static_cast<long>(u) < half ? static_cast<long>(u)
                                                : static_cast<long>(u) - static_cast<long>(grid);
    for (std::size_t v = 0; v < grid; ++v) {
      const long kx = static_cast<long>(v) < half ? static_cast<long>(v)
                                                  : static_cast<long>(v) - static_cast<long>(grid);
      const double angle = -2.0 * std::numbers::pi *
                           (static_cast<double>(ky) * shift_y +
                            static_cast<double>(kx) * shift_x) /
                           static_cast<double>(grid);
      spec.at(u, v) *= std::polar(1.0, angle);
    }
  }
  return spectral::ifft2_real(spec);
}

std::vector<Image> render_scene(const Scene& scene, std::size_t size,
                                std::size_t frames) {
  const std::size_t grid = spectral::next_power_of_two(size);
  const auto texture = texture_spectrum(scene.texture_seed, grid);
  const double soft = 0.6 * static_cast<double>(size) / 64.0;
  const auto sz = static_cast<double>(size);
  std::vector<Image> out;
  out.reserve(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const double oy = scene.vy * static_cast<double>(t) + scene.jitter_y[t];
    const double ox = scene.vx * static_cast<double>(t) + scene.jitter_x[t];
    const auto tex = shifted_texture(texture, oy * sz, ox * sz);
    Image frame(3, size, size);
    for (std::size_t y = 0; y < size; ++y) {
      for (std::size_t x = 0; x < size; ++x) {
        const double ys = (static_cast<double>(y) + 0.5) / sz - oy;
        const double xs = (static_cast<double>(x) + 0.5) / sz - ox;
        double px[3];
        for (int c = 0; c < 3; ++c) {
          px[c] = scene.base[c] + scene.grad_y[c] * (ys - 0.5) +
                  scene.grad_x[c] * (xs - 0.5) +
                  scene.texture_gain[c] * scene.texture_strength * tex[y * grid + x];
        }
        for (const auto& shape : scene.shapes) {
          const double d = shape_distance(scene.content_class, (ys - shape.cy) * sz,
                                          (xs - shape.cx) * sz, shape.radius * sz);
          const double alpha = 1.0 / (1.0 + std::exp(d / soft));
          for (int c = 0; c < 3; ++c)
            px[c] = px[c] * (1.0 - alpha) + shape.color[c] * alpha;
        }
        for (std::size_t c = 0; c < 3; ++c) frame.at(c, y, x) = px[c];
      }
    }
    out.push_back(std::move(frame));
  }
  // One affine map for the whole clip, fixed by frame 0, so every clip has
  // the same first-frame mean and spread.
  const auto& first = out.front().data;
  double mean = 0.0;
  for (double v : first) mean += v;
  mean /= static_cast<double>(first.size());
  double var = 0.0;
  for (double v : first) var += (v - mean) * (v - mean);
  var /= static_cast<double>(first.size());
  const double gain = kTargetStd / std::sqrt(std::max(var, 1e-12));
  for (auto& frame : out)
    for (auto& v : frame.data)
      v = std::clamp(kTargetMean + gain * (v - mean), 0.0, 1.0);
  return out;
}

Image upsample_nearest(const Image& half) {
  Image out(half.channels, half.height * 2, half.width * 2);
  for (std::size_t c = 0; c < half.channels; ++c)
    for (std::size_t y = 0; y < out.height; ++y)
      for (std::size_t x = 0; x < out.width; ++x)
        out.at(c, y, x) = half.at(c, y / 2, x / 2);
  return out;
}

double artifact_energy_per_channel(const ArtifactParams& params, std::size_t size) {
  const double comps = 2.0 * static_cast<double>(params.reference_radii.size());
  return comps * params.amplitude * params.amplitude / 2.0 *
         static_cast<double>(size * size);
}

}  // namespace

std::string to_string(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::kNone: return "none";
    case ArtifactKind::kGrid: return "grid";
    case ArtifactKind::kUpsample: return "upsample";
  }
  return "none";
}

std::string to_string(DatasetMode mode) {
  switch (mode) {
    case DatasetMode::kStandard: return "standard";
    case DatasetMode::kSemanticConfound: return "semantic_confound";
    case DatasetMode::kNoiseConfound: return "noise_confound";
  }
  return "standard";
}

ArtifactKind parse_artifact_kind(const std::string& name) {
  if (name == "none") return ArtifactKind::kNone;
  if (name == "grid") return ArtifactKind::kGrid;
  if (name == "upsample") return ArtifactKind::kUpsample;
  throw UsageError("unknown artifact kind '" + name + "'");
}

DatasetMode parse_mode(const std::string& name) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '-', '_');
  if (n == "standard") return DatasetMode::kStandard;
  if (n == "semantic_confound") return DatasetMode::kSemanticConfound;
  if (n == "noise_confound") return DatasetMode::kNoiseConfound;
  throw UsageError("unknown dataset mode '" + name +
                   "' (expected standard, semantic-confound or noise-confound)");
}

std::vector<SinusoidComponent> artifact_frequencies(const ArtifactParams& params,
                                                    std::size_t size) {
  // Radius i uses orientations theta_i and theta_i + 90 degrees with
  // theta_i = 45 degrees * i.
  std::vector<SinusoidComponent> out;
  for (std::size_t i = 0; i < params.reference_radii.size(); ++i) {
    const double f = params.reference_radii[i] * static_cast<double>(size) /
                     224.0;
    const double theta = std::numbers::pi / 4.0 * static_cast<double>(i);
    for (int k = 0; k < 2; ++k) {
      const double a = theta + std::numbers::pi / 2.0 * k;
      SinusoidComponent comp;
      comp.fy = static_cast<int>(std::lround(f * std::sin(a)));
      comp.fx = static_cast<int>(std::lround(f * std::cos(a)));
      out.push_back(comp);
    }
  }
  return out;
}

Clip gen_real_clip(std::uint64_t seed, std::size_t frames, std::size_t size) {
  if (frames == 0 || size < 8) {
    throw ContractError("clips need at least one frame of at least 8x8 pixels");
  }
  const Scene scene = sample_scene(seed, frames);
  Clip clip;
  clip.frames = render_scene(scene, size, frames);
  for (auto& f : clip.frames) quantize_8bit(f);
  clip.label = kRealLabel;
  clip.seed = seed;
  clip.content_class = scene.content_class;
  return clip;
}

Clip gen_fake_clip(std::uint64_t seed, std::size_t frames, std::size_t size,
                   ArtifactKind kind, const ArtifactParams& params) {
  if (frames == 0 || size < 8) {
    throw ContractError("clips need at least one frame of at least 8x8 pixels");
  }
  const Scene scene = sample_scene(seed, frames);
  Clip clip;
  clip.label = kFakeLabel;
  clip.seed = seed;
  clip.content_class = scene.content_class;
  clip.artifact.kind = kind;
  switch (kind) {
    case ArtifactKind::kGrid: {
      clip.frames = render_scene(scene, size, frames);
      Rng rng(seed, kArtifactStream);
      clip.artifact.amplitude = params.amplitude;
      clip.artifact.components = artifact_frequencies(params, size);
      for (auto& comp : clip.artifact.components)
        comp.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      for (std::size_t t = 0; t < frames; ++t)
        clip.artifact.frame_gains.push_back(1.0 + params.flicker * rng.uniform(-1.0, 1.0));
      const auto sz = static_cast<double>(size);
      std::vector<double> pattern(size * size, 0.0);
      for (const auto& comp : clip.artifact.components) {
        for (std::size_t y = 0; y < size; ++y)
          for (std::size_t x = 0; x < size; ++x)
            pattern[y * size + x] += std::cos(
                2.0 * std::numbers::pi *
                    (comp.fy * static_cast<double>(y) + comp.fx * static_cast<double>(x)) / sz +
                comp.phase);
      }
      for (std::size_t t = 0; t < frames; ++t) {
        const double a = params.amplitude * clip.artifact.frame_gains[t];
        for (std::size_t c = 0; c < 3; ++c) {
          auto plane = clip.frames[t].channel(c);
          for (std::size_t i = 0; i < plane.size(); ++i)
            plane[i] = std::clamp(plane[i] + a * pattern[i], 0.0, 1.0);
        }
      }
      break;
    }
    case ArtifactKind::kUpsample: {
      if (size % 2 != 0) throw ContractError("upsample fakes need an even size");
      for (auto& half : render_scene(scene, size / 2, frames))
        clip.frames.push_back(upsample_nearest(half));
      break;
    }
    case ArtifactKind::kNone:
      throw ContractError("fake clips need an artifact kind");
  }
  for (auto& f : clip.frames) quantize_8bit(f);
  return clip;
}

void add_sparks(Clip& clip, const SparkParams& params,
                const ArtifactParams& reference) {
  if (clip.frames.empty()) return;
  const std::size_t size = clip.frames.front().height;
  const std::size_t width = clip.frames.front().width;
  const Scene scene = sample_scene(clip.seed, clip.frames.size());
  Rng rng(clip.seed, kSparkStream);
  const auto sz = static_cast<double>(size);
  const double cy = rng.uniform(0.25, 0.75), cx = rng.uniform(0.25, 0.75);
  const auto count = std::max<std::size_t>(
      8, static_cast<std::size_t>(std::lround(params.density * sz * sz)));
  const double amplitude = std::sqrt(params.energy_ratio *
                                     artifact_energy_per_channel(reference, size) /
                                     static_cast<double>(count));
  const double warm[3] = {1.0, 0.8, 0.45};
  const double radius = params.cluster_radius * sz;
  clip.sparks.assign(clip.frames.size(), {});
  for (std::size_t t = 0; t < clip.frames.size(); ++t) {
    const double oy = scene.vy * static_cast<double>(t) + scene.jitter_y[t];
    const double ox = scene.vx * static_cast<double>(t) + scene.jitter_x[t];
    Image& frame = clip.frames[t];
    for (std::size_t k = 0; k < count; ++k) {
      const double rr = radius * std::sqrt(rng.uniform());
      const double aa = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double py = (cy + oy) * sz + rr * std::sin(aa);
      const double px = (cx + ox) * sz + rr * std::cos(aa);
      const auto y = static_cast<std::size_t>(std::clamp(std::floor(py), 0.0, sz - 1));
      const auto x = static_cast<std::size_t>(
          std::clamp(std::floor(px), 0.0, static_cast<double>(width) - 1));
      for (std::size_t c = 0; c < 3; ++c)
        frame.at(c, y, x) = std::clamp(frame.at(c, y, x) + amplitude * warm[c], 0.0, 1.0);
      clip.sparks[t].push_back({y, x});
    }
    quantize_8bit(frame);
  }
}

}  // namespace specsem::datagen
