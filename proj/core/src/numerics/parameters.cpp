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

#include "specsem/numerics/parameters.hpp"

#include <algorithm>
#include <cstring>

#include "specsem/errors.hpp"

namespace specsem::numerics {

void set_requires_grad(const ParameterList& params, bool value) {
  for (const auto& p : params) {
    Tensor t = p.tensor;
    t.set_requires_grad(value);
  }
}

void zero_grads(const ParameterList& params) {
  for (const auto& p : params) {
    Tensor t = p.tensor;
    t.zero_grad();
  }
}

std::size_t parameter_count(const ParameterList& params) {
  std::size_t n = 0;
  for (const auto& p : params) n += p.tensor.numel();
  return n;
}

std::uint64_t checksum(const ParameterList& params) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& p : params) {
    for (double v : p.tensor.data()) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &v, sizeof(double));
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
      }
    }
  }
  return h;
}

void round_to_float32(const ParameterList& params) {
  for (const auto& p : params) {
    Tensor t = p.tensor;
    for (auto& v : t.mutable_data()) v = static_cast<double>(static_cast<float>(v));
  }
}

void copy_values(const ParameterList& src, const ParameterList& dst) {
  if (src.size() != dst.size()) {
    throw ModelError("parameter lists differ in length");
  }
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i].name != dst[i].name ||
        src[i].tensor.shape() != dst[i].tensor.shape()) {
      throw ModelError("parameter mismatch at " + src[i].name);
    }
    Tensor t = dst[i].tensor;
    std::copy(src[i].tensor.data().begin(), src[i].tensor.data().end(),
              t.mutable_data().begin());
  }
}

}  // namespace specsem::numerics
