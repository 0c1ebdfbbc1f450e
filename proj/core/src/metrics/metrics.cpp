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

#include "specsem/metrics/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "specsem/errors.hpp"

namespace specsem::metrics {

std::size_t ScoredSet::positives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

void ScoredSet::validate() const {
  if (scores.size() != labels.size()) {
    throw ContractError("scored set has " + std::to_string(scores.size()) +
                        " scores but " + std::to_string(labels.size()) + " labels");
  }
  if (scores.empty()) throw ContractError("scored set is empty");
  for (int y : labels)
    if (y != 0 && y != 1) throw ContractError("labels must be 0 or 1");
}

Confusion confusion(const ScoredSet& s, double threshold) {
  s.validate();
  Confusion c;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool pred = s.scores[i] >= threshold;
    const bool pos = s.labels[i] == 1;
    if (pred && pos) ++c.tp;
    else if (pred) ++c.fp;
    else if (pos) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double accuracy(const ScoredSet& s, double threshold) {
  const Confusion c = confusion(s, threshold);
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(s.size());
}

double f1(const ScoredSet& s, double threshold) {
  const Confusion c = confusion(s, threshold);
  // 2PR/(P+R) simplifies to 2TP/(2TP+FP+FN).
  const std::size_t denom = 2 * c.tp + c.fp + c.fn;
  if (c.tp == 0 || denom == 0) return 0.0;
  return static_cast<double>(2 * c.tp) / static_cast<double>(denom);
}

PRCurve pr_curve(const ScoredSet& s) {
  s.validate();
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s.scores[a] > s.scores[b];
  });
  const auto pos = static_cast<double>(s.positives());
  PRCurve curve;
  std::size_t tp = 0;
  for (std::size_t n = 0; n < order.size(); ++n) {
    if (s.labels[order[n]] == 1) ++tp;
    curve.recall.push_back(pos > 0 ? static_cast<double>(tp) / pos : 0.0);
    curve.precision.push_back(static_cast<double>(tp) / static_cast<double>(n + 1));
  }
  return curve;
}

double average_precision(const ScoredSet& s) {
  s.validate();
  const std::size_t pos = s.positives();
  if (pos == 0 || pos == s.size()) {
    throw ContractError("average precision needs both classes");
  }
  const PRCurve c = pr_curve(s);
  double ap = 0.0, prev = 0.0;
  for (std::size_t n = 0; n < c.recall.size(); ++n) {
    ap += (c.recall[n] - prev) * c.precision[n];
    prev = c.recall[n];
  }
  return ap;
}

}  // namespace specsem::metrics
