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

#include "specsem/numerics/parameters.hpp"
#include "specsem/numerics/tensor.hpp"
#include "specsem/rng.hpp"

namespace specsem::backbone {

using numerics::ParameterList;
using numerics::Tensor;

// y = x W + b with W: [in, out]. Xavier-uniform weights, zero bias.
struct Linear {
  Tensor weight;
  Tensor bias;

  Linear() = default;
  Linear(std::size_t in, std::size_t out, Rng& rng);
  static Linear zeros(std::size_t in, std::size_t out);

  Tensor operator()(const Tensor& x) const;
  void collect(const std::string& prefix, ParameterList& out) const;
};

struct LayerNorm {
  Tensor gamma;
  Tensor beta;
  double eps = 1e-5;

  LayerNorm() = default;
  explicit LayerNorm(std::size_t dim);

  Tensor operator()(const Tensor& x) const;
  void collect(const std::string& prefix, ParameterList& out) const;
};

// Pre-norm transformer block with bidirectional multi-head self-attention:
//   x = x + Attn(LN1(x));  x = x + MLP(LN2(x))
class TransformerBlock {
 public:
  TransformerBlock() = default;
  TransformerBlock(std::size_t dim, std::size_t heads, std::size_t mlp_ratio,
                   Rng& rng);

  Tensor operator()(const Tensor& x) const { return forward(x, nullptr); }
  // Optionally reports the per-head attention matrices.
  Tensor forward(const Tensor& x, std::vector<Tensor>* attention) const;

  void collect(const std::string& prefix, ParameterList& out) const;

  std::size_t dim() const { return dim_; }
  std::size_t heads() const { return heads_; }

  LayerNorm ln1;
  Linear qkv;
  Linear proj;
  LayerNorm ln2;
  Linear fc1;
  Linear fc2;

 private:
  std::size_t dim_ = 0;
  std::size_t heads_ = 1;
};

// Multiply-accumulate count of one block on `tokens` tokens:
//   2 T^2 d + 4 T d^2 + 2 T d (mlp_ratio d)
std::uint64_t block_macs(std::uint64_t tokens, std::uint64_t dim,
                         std::uint64_t mlp_ratio);

}  // namespace specsem::backbone
