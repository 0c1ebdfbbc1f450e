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

#include "specsem/fusion/gate.hpp"

#include "specsem/errors.hpp"
#include "specsem/numerics/ops.hpp"

namespace specsem::fusion {

namespace ops = numerics;

GateBlock::GateBlock(std::size_t dim, Rng& rng)
    : fc1(2 * dim, dim, rng), fc2(Linear::zeros(dim, dim)) {}

Tensor GateBlock::operator()(const Tensor& semantic, const Tensor& spectral) const {
  if (semantic.shape() != spectral.shape()) {
    throw DimensionError("gate inputs differ: " +
                         numerics::shape_string(semantic.shape()) + " vs " +
                         numerics::shape_string(spectral.shape()));
  }
  if (2 * semantic.cols() != fc1.weight.dim(0)) {
    throw DimensionError("gate expects " + std::to_string(fc1.weight.dim(0) / 2) +
                         " channels per stream");
  }
  const Tensor joined = ops::concat_cols(semantic, spectral);
  return ops::sigmoid(fc2(ops::gelu(fc1(joined))));
}

void GateBlock::collect(const std::string& prefix, ParameterList& out) const {
  fc1.collect(prefix + ".fc1", out);
  fc2.collect(prefix + ".fc2", out);
}

LayerState merge(std::size_t layer, const Tensor& gate,
                 const Tensor& semantic_hat, const Tensor& spectral_hat) {
  // spectral * (1 + g) == spectral + g * spectral
  return {semantic_hat, ops::add(spectral_hat, ops::mul(gate, spectral_hat)),
          layer + 1};
}

}  // namespace specsem::fusion
