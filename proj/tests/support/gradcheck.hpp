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

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "specsem/numerics/tape.hpp"
#include "specsem/numerics/tensor.hpp"
#include "specsem/rng.hpp"

namespace specsem::testing {

struct GradcheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::string worst;  // "<leaf>[<index>]: analytic vs numeric"
};

struct GradcheckOptions {
  double step = 1e-6;
  // Denominator floor, so entries with vanishing gradient are compared in
  // absolute terms.
  double floor = 1e-8;
  // 0 checks every entry; otherwise this many sampled entries per leaf plus
  // the entry with the largest analytic gradient.
  std::size_t samples_per_leaf = 0;
  std::uint64_t seed = 7;
};

// Compares reverse-mode gradients of a scalar loss with central differences.
// `loss_fn` must rebuild the graph from the current leaf values each call.
inline GradcheckResult gradcheck(const std::function<numerics::Tensor()>& loss_fn,
                                 std::vector<numerics::Tensor> leaves,
                                 const std::vector<std::string>& names = {},
                                 GradcheckOptions opt = {}) {
  for (auto& leaf : leaves) {
    leaf.set_requires_grad(true);
    leaf.zero_grad();
  }
  {
    numerics::Tape tape;
    numerics::Tape::Scope scope(tape);
    tape.backward(loss_fn());
  }
  std::vector<std::vector<double>> analytic;
  for (const auto& leaf : leaves) {
    const auto g = leaf.grad();
    analytic.emplace_back(g.begin(), g.end());
  }

  numerics::NoGradGuard guard;
  Rng rng(opt.seed);
  GradcheckResult result;
  for (std::size_t l = 0; l < leaves.size(); ++l) {
    auto& leaf = leaves[l];
    std::vector<std::size_t> entries;
    if (opt.samples_per_leaf == 0 || opt.samples_per_leaf >= leaf.numel()) {
      for (std::size_t i = 0; i < leaf.numel(); ++i) entries.push_back(i);
    } else {
      for (std::size_t k = 0; k < opt.samples_per_leaf; ++k) entries.push_back(rng.below(leaf.numel()));
      const auto& a = analytic[l];
      entries.push_back(static_cast<std::size_t>(
          std::max_element(a.begin(), a.end(),
                           [](double x, double y) { return std::abs(x) < std::abs(y); }) -
          a.begin()));
    }
    for (std::size_t i : entries) {
      auto data = leaf.mutable_data();
      const double saved = data[i];
      data[i] = saved + opt.step;
      const double up = loss_fn().item();
      data[i] = saved - opt.step;
      const double down = loss_fn().item();
      data[i] = saved;
      const double numeric = (up - down) / (2.0 * opt.step);
      const double a = analytic[l][i];
      const double rel =
          std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), opt.floor});
      ++result.checked;
      if (rel > result.max_rel_error || result.worst.empty()) {
        if (rel >= result.max_rel_error) {
          result.max_rel_error = rel;
          result.worst = (l < names.size() ? names[l] : "leaf" + std::to_string(l)) + "[" +
                         std::to_string(i) + "]: " + std::to_string(a) + " vs " +
                         std::to_string(numeric);
        }
      }
    }
  }
  return result;
}

// Random tensor with entries uniform in [lo, hi).
inline numerics::Tensor random_tensor(numerics::Shape shape, Rng& rng, double lo = -1.0,
                                      double hi = 1.0) {
  std::vector<double> data(numerics::shape_numel(shape));
  for (auto& v : data) v = rng.uniform(lo, hi);
  return numerics::Tensor(std::move(shape), std::move(data));
}

}  // namespace specsem::testing
