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

#include "specsem/numerics/init.hpp"

#include <cmath>

namespace specsem::numerics {

Tensor xavier_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::vector<double> data(fan_in * fan_out);
  for (auto& v : data) v = rng.uniform(-limit, limit);
  return Tensor({fan_in, fan_out}, std::move(data));
}

Tensor normal_init(Shape shape, double stddev, Rng& rng) {
  std::vector<double> data(shape_numel(shape));
  for (auto& v : data) v = stddev * rng.normal();
  return Tensor(std::move(shape), std::move(data));
}

}  // namespace specsem::numerics
