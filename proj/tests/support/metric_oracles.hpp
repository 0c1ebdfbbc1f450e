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

// Independent recomputations of Acc, F1 and AP.

#include <cstdint>
#include <numeric>

#include "specsem/metrics/metrics.hpp"
#include "specsem/rng.hpp"

namespace specsem::testing {

using metrics::ScoredSet;

struct Fraction {
  std::uint64_t num, den;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline Fraction reduce(std::uint64_t n, std::uint64_t d) {
  const auto g = std::gcd(n, d);
  return {n / g, d / g};
}

// Accuracy and F1 as reduced fractions from per-item predicates; F1 goes
// through precision and recall explicitly.
inline Fraction oracle_accuracy(const ScoredSet& s, double t) {
  std::uint64_t ok = 0;
  for (std::size_t i = 0; i < s.size(); ++i) ok += (s.scores[i] >= t ? 1 : 0) == s.labels[i];
  return reduce(ok, s.size());
}

inline Fraction oracle_f1(const ScoredSet& s, double t) {
  std::uint64_t tp = 0, pred = 0, pos = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool p = s.scores[i] >= t;
    pred += p;
    pos += s.labels[i] == 1;
    tp += p && s.labels[i] == 1;
  }
  if (tp == 0) return {0, 1};
  // P = tp/pred, R = tp/pos, 2PR/(P+R) = 2 tp^2/(pred pos) / (tp (pos + pred)/(pred pos))
  return reduce(2 * tp, pos + pred);
}

// O(n^2) AP: for every positive, precision among all items ranked at or
// above it (earlier index wins ties).
inline double oracle_ap(const ScoredSet& s) {
  double sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.labels[i] != 1) continue;
    ++positives;
    std::size_t above = 0, above_pos = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const bool ranked = s.scores[j] > s.scores[i] || (s.scores[j] == s.scores[i] && j <= i);
      above += ranked;
      above_pos += ranked && s.labels[j] == 1;
    }
    sum += static_cast<double>(above_pos) / static_cast<double>(above);
  }
  return sum / static_cast<double>(positives);
}

inline ScoredSet random_set(Rng& rng) {
  ScoredSet s;
  const std::size_t n = 1 + rng.below(50);
  const bool coarse = rng.uniform() < 0.5;  // many ties
  for (std::size_t i = 0; i < n; ++i) {
    s.scores.push_back(coarse ? static_cast<double>(rng.below(5)) / 4.0 : rng.uniform());
    s.labels.push_back(static_cast<int>(rng.below(2)));
  }
  return s;
}

}  // namespace specsem::testing
