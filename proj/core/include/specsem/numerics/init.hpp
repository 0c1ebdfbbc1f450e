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

#include "specsem/numerics/tensor.hpp"
#include "specsem/rng.hpp"

namespace specsem::numerics {

// Xavier/Glorot uniform with gain 1 for a [fan_in, fan_out] weight matrix.
Tensor xavier_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng);

// N(0, stddev^2) entries; used for class tokens and positional embeddings.
Tensor normal_init(Shape shape, double stddev, Rng& rng);

}  // namespace specsem::numerics
