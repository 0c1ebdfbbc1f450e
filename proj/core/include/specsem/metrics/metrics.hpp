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

#include <cstddef>
#include <vector>

namespace specsem::metrics {

// Parallel score/label lists. Label 1 (fake) is the positive class.
struct ScoredSet {
  std::vector<double> scores;
  std::vector<int> labels;

  std::size_t size() const { return scores.size(); }
  std::size_t positives() const;
  // Throws ContractError on length mismatch, empty input or labels outside
  // {0, 1}.
  void validate() const;
};

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};
Confusion confusion(const ScoredSet& s, double threshold = 0.5);

// Fraction of items with (score >= threshold) == label.
double accuracy(const ScoredSet& s, double threshold = 0.5);

// Harmonic mean of precision and recall; 0 when both are 0 or undefined.
double f1(const ScoredSet& s, double threshold = 0.5);

// One point per item of the descending-score sweep (ties keep input order).
struct PRCurve {
  std::vector<double> recall;
  std::vector<double> precision;
};
PRCurve pr_curve(const ScoredSet& s);

// Step-wise AP: sum over the sweep of (R_n - R_{n-1}) * P_n. Needs both
// classes present; throws ContractError otherwise.
double average_precision(const ScoredSet& s);

}  // namespace specsem::metrics
