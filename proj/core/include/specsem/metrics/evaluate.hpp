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

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "specsem/datagen/dataset.hpp"
#include "specsem/metrics/metrics.hpp"
#include "specsem/metrics/perturb.hpp"

namespace specsem::metrics {

// Maps a clip to p(fake) in [0, 1].
using Scorer = std::function<double(const datagen::Clip&)>;

struct SubsetMetrics {
  std::string name;
  std::size_t count = 0;
  double acc = 0.0;
  double f1 = 0.0;
  std::optional<double> ap;  // undefined for single-class subsets
};

struct ClipScore {
  std::string id;
  std::string subset;
  int label = 0;
  double score = 0.0;
};

struct Report {
  std::vector<SubsetMetrics> subsets;
  SubsetMetrics mean;  // macro mean over subsets; AP over subsets that define it
  std::vector<ClipScore> scores;

  std::string table() const;
  std::string json() const;
};

// Metrics of one scored set under the conventions of metrics.hpp.
SubsetMetrics summarize(const std::string& name, const ScoredSet& set);

// Macro average of per-subset metrics.
Report build_report(std::vector<ClipScore> scores);

// Scores every clip of `split` (frames perturbed first when a perturbation
// is given) and groups them by the manifest's mode tag.
Report evaluate(const Scorer& scorer, const datagen::DatasetManifest& manifest,
                const std::filesystem::path& root, datagen::Split split,
                const std::optional<Perturbation>& perturbation = std::nullopt);

}  // namespace specsem::metrics
