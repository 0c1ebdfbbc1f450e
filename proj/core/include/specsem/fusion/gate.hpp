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

#include "specsem/backbone/layers.hpp"

namespace specsem::fusion {

using backbone::Linear;
using numerics::ParameterList;
using numerics::Tensor;

// Per-layer gate MLP: [F_sem ; F_spec] (2d) -> d -> GELU -> d -> sigmoid,
// shared across tokens. The output layer starts at zero, so a fresh gate
// emits 0.5 everywhere.
class GateBlock {
 public:
  GateBlock() = default;
  GateBlock(std::size_t dim, Rng& rng);

  // [T, d] x [T, d] -> [T, d] with entries in (0, 1).
  Tensor operator()(const Tensor& semantic, const Tensor& spectral) const;
  void collect(const std::string& prefix, ParameterList& out) const;

  Linear fc1;
  Linear fc2;
};

// Paired token features entering layer `layer` (1-based; depth + 1 after the
// last block).
struct LayerState {
  Tensor semantic;
  Tensor spectral;
  std::size_t layer = 1;
};

// Semantic stream passes through untouched; spectral tokens are scaled by
// (1 + gate) elementwise.
LayerState merge(std::size_t layer, const Tensor& gate,
                 const Tensor& semantic_hat, const Tensor& spectral_hat);

}  // namespace specsem::fusion
