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
#include <filesystem>
#include <string>
#include <vector>

#include "specsem/datagen/clip.hpp"

namespace specsem::datagen {

enum class Split { kTrain, kVal, kTest };
std::string to_string(Split split);
Split parse_split(const std::string& name);

struct ManifestEntry {
  std::string id;    // "<split>/<clip_id>"
  std::string path;  // directory relative to the dataset root
  int label = kRealLabel;
  DatasetMode mode = DatasetMode::kStandard;
  std::uint64_t seed = 0;
  Split split = Split::kTrain;
  ArtifactKind artifact = ArtifactKind::kNone;
  std::size_t content_class = 0;
};

struct DatasetManifest {
  int version = 1;
  DatasetMode mode = DatasetMode::kStandard;
  std::uint64_t seed = 0;
  std::size_t frames = 0;
  std::size_t size = 0;
  std::vector<ManifestEntry> clips;

  std::vector<ManifestEntry> split(Split which) const;
};

struct DatasetSpec {
  DatasetMode mode = DatasetMode::kStandard;
  std::size_t train_per_class = 8;
  std::size_t val_per_class = 0;
  std::size_t test_per_class = 0;
  std::size_t frames = 8;
  std::size_t size = 64;
  std::uint64_t seed = 1;
  // Standard mode cycles through these kinds by clip index; the confound
  // modes always use grid fakes.
  std::vector<ArtifactKind> fake_kinds = {ArtifactKind::kGrid};
  ArtifactParams artifact;
  SparkParams sparks;
};

// Seed of clip `index` in a split. Splits occupy disjoint seed ranges:
// seed * 1e6 + {0, 300000, 600000} + index (+100000 for independent fakes).
std::uint64_t clip_seed(std::uint64_t dataset_seed, Split split, int label,
                        std::size_t index, DatasetMode mode);

// Builds the clips described by `spec` in memory, in manifest order.
std::vector<std::pair<ManifestEntry, Clip>> build_dataset(const DatasetSpec& spec);

// Writes <root>/<split>/<clip_id>/frame_NNNN.ppm + clip.json and
// <root>/manifest.json. Refuses a non-empty root unless `force`.
// Enforces the real/fake marginal-statistics check before writing.
DatasetManifest gen_dataset(const DatasetSpec& spec,
                            const std::filesystem::path& root, bool force = false);

std::string manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const std::string& text);
void write_manifest(const std::filesystem::path& path,
                    const DatasetManifest& manifest);
// Validates unique paths; existence is checked by load_clip.
DatasetManifest read_manifest(const std::filesystem::path& path);

void write_clip(const std::filesystem::path& dir, const Clip& clip);
Clip load_clip(const std::filesystem::path& dir);

// Relative gap between the class medians of per-frame mean and variance.
struct MarginalGap {
  double mean_gap = 0.0;
  double variance_gap = 0.0;
};
MarginalGap marginal_gap(const std::vector<const Clip*>& reals,
                         const std::vector<const Clip*>& fakes);
inline constexpr double kMaxMarginalGap = 0.05;

// Accuracy of a logistic-regression probe on frames box-downsampled to 8x8,
// trained on `train` and scored on `test`. Used to confirm that the
// semantic-confound split carries no low-frequency label signal.
double downsampled_probe_accuracy(const std::vector<const Clip*>& train,
                                  const std::vector<const Clip*>& test);

}  // namespace specsem::datagen
