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

#include <cstdint>
#include <string>
#include <vector>

#include "specsem/numerics/tensor.hpp"

namespace specsem::numerics {

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

// Handles to trainable leaves; updating a handle's data updates the model.
using ParameterList = std::vector<NamedTensor>;

void set_requires_grad(const ParameterList& params, bool value);
void zero_grads(const ParameterList& params);
std::size_t parameter_count(const ParameterList& params);
// FNV-1a over the raw bytes of every value, in list order.
std::uint64_t checksum(const ParameterList& params);
// Rounds every value to the nearest float32.
void round_to_float32(const ParameterList& params);
// Copies values (not handles) from src into dst; names and shapes must match.
void copy_values(const ParameterList& src, const ParameterList& dst);

}  // namespace specsem::numerics
