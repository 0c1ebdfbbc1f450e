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

#include <cstdint>
#include <string>
#include <vector>

#include "specsem/image.hpp"

namespace specsem::datagen {

enum class ArtifactKind { kNone, kGrid, kUpsample };
enum class DatasetMode { kStandard, kSemanticConfound, kNoiseConfound };

std::string to_string(ArtifactKind kind);
std::string to_string(DatasetMode mode);
ArtifactKind parse_artifact_kind(const std::string& name);
// Accepts underscores or hyphens ("semantic-confound").
DatasetMode parse_mode(const std::string& name);

inline constexpr int kRealLabel = 0;
inline constexpr int kFakeLabel = 1;

// Periodic grid artifact: components are integer frequency vectors on the
// frame grid, each a cosine of peak `amplitude` (intensity units, [0, 1]
// range) with its own phase. Every frame scales the pattern by its gain.
struct ArtifactParams {
  double amplitude = 0.02;
  // Radii on the 224-pixel reference grid; two orientations each.
  std::vector<double> reference_radii = {64.0, 80.0};
  double flicker = 0.3;
};

struct SinusoidComponent {
  int fy = 0;
  int fx = 0;
  double phase = 0.0;
};

struct ArtifactDescriptor {
  ArtifactKind kind = ArtifactKind::kNone;
  double amplitude = 0.0;
  std::vector<SinusoidComponent> components;
  std::vector<double> frame_gains;
};

// Benign aperiodic speckle: single-pixel warm sparks scattered in a disc
// around a source that moves with the scene.
struct SparkParams {
  // Sparks per frame as a fraction of pixels (at least 8).
  double density = 0.01;
  // Total speckle energy per frame relative to the grid artifact's energy.
  double energy_ratio = 1.0;
  // Cluster radius as a fraction of the frame size.
  double cluster_radius = 0.12;
};

struct Spark {
  std::size_t y = 0;
  std::size_t x = 0;
};

struct Clip {
  std::vector<Image> frames;
  int label = kRealLabel;
  DatasetMode mode = DatasetMode::kStandard;
  std::uint64_t seed = 0;
  std::size_t content_class = 0;
  ArtifactDescriptor artifact;
  std::vector<std::vector<Spark>> sparks;  // per frame; empty without sparks
};

inline constexpr std::size_t kContentClasses = 4;

// Natural-looking clip: 1/f^2 power-law texture, smooth colour gradient and
// 2-4 soft shapes whose kind is the content class, translated at a constant
// sub-pixel velocity with per-frame jitter. Frames are 8-bit quantised.
Clip gen_real_clip(std::uint64_t seed, std::size_t frames, std::size_t size);

// kGrid: the real clip for the same seed plus the periodic artifact.
// kUpsample: the scene rendered at half resolution and nearest-neighbour
// upsampled, giving exact 2x2 replication blocks.
Clip gen_fake_clip(std::uint64_t seed, std::size_t frames, std::size_t size,
                   ArtifactKind kind, const ArtifactParams& params = {});

// Adds speckle to every frame of a clip (re-quantising) and records the
// spark positions.
void add_sparks(Clip& clip, const SparkParams& params = {},
                const ArtifactParams& reference = {});

// Frequency vectors of the artifact components for a frame size.
std::vector<SinusoidComponent> artifact_frequencies(const ArtifactParams& params,
                                                    std::size_t size);

}  // namespace specsem::datagen
