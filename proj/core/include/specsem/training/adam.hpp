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
#include <span>
#include <vector>

#include "specsem/numerics/parameters.hpp"
#include "specsem/training/config.hpp"

namespace specsem::training {

// First and second moments for one parameter tensor.
struct AdamSlot {
  std::vector<double> m;
  std::vector<double> v;
};

// One Adam update with bias correction at step t >= 1. Weight decay is
// added to the gradient before the moment updates. Throws DimensionError
// when the sizes of value, grad and state disagree.
void adam_step(std::span<double> value, std::span<const double> grad,
               AdamSlot& slot, std::size_t t, const OptimizerConfig& opt);

// Adam over a fixed parameter list, reading each tensor's accumulated grad.
// Tensors that received no gradient since the last zero_grad are skipped.
class Adam {
 public:
  Adam(numerics::ParameterList params, OptimizerConfig opt);

  void step();
  void zero_grad();
  std::size_t steps() const { return t_; }
  const numerics::ParameterList& parameters() const { return params_; }

 private:
  numerics::ParameterList params_;
  OptimizerConfig opt_;
  std::vector<AdamSlot> slots_;
  std::size_t t_ = 0;
};

}  // namespace specsem::training
