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

#include "specsem/backbone/layers.hpp"

#include <cmath>

#include "specsem/errors.hpp"
#include "specsem/numerics/init.hpp"
#include "specsem/numerics/ops.hpp"

namespace specsem::backbone {

namespace ops = numerics;

Linear::Linear(std::size_t in, std::size_t out, Rng& rng)
    : weight(numerics::xavier_uniform(in, out, rng)),
      bias(Tensor::zeros({out})) {}

Linear Linear::zeros(std::size_t in, std::size_t out) {
  Linear l;
  l.weight = Tensor::zeros({in, out});
  l.bias = Tensor::zeros({out});
  return l;
}

Tensor Linear::operator()(const Tensor& x) const {
  return ops::add_bias(ops::matmul(x, weight), bias);
}

void Linear::collect(const std::string& prefix, ParameterList& out) const {
  out.push_back({prefix + ".weight", weight});
  out.push_back({prefix + ".bias", bias});
}

LayerNorm::LayerNorm(std::size_t dim)
    : gamma(Tensor::full({dim}, 1.0)), beta(Tensor::zeros({dim})) {}

Tensor LayerNorm::operator()(const Tensor& x) const {
  return ops::layernorm(x, gamma, beta, eps);
}

void LayerNorm::collect(const std::string& prefix, ParameterList& out) const {
  out.push_back({prefix + ".gamma", gamma});
  out.push_back({prefix + ".beta", beta});
}

TransformerBlock::TransformerBlock(std::size_t dim, std::size_t heads,
                                   std::size_t mlp_ratio, Rng& rng)
    : ln1(dim), qkv(dim, 3 * dim, rng), proj(dim, dim, rng), ln2(dim),
      fc1(dim, mlp_ratio * dim, rng), fc2(mlp_ratio * dim, dim, rng),
      dim_(dim), heads_(heads) {
  if (heads == 0 || dim % heads != 0) {
    throw ContractError("block width " + std::to_string(dim) +
                        " is not divisible by " + std::to_string(heads) +
                        " heads");
  }
}

Tensor TransformerBlock::forward(const Tensor& x,
                                 std::vector<Tensor>* attention) const {
  const std::size_t head_dim = dim_ / heads_;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(head_dim));
  const Tensor packed = qkv(ln1(x));
  Tensor mixed;
  for (std::size_t h = 0; h < heads_; ++h) {
    const std::size_t lo = h * head_dim, hi = lo + head_dim;
    const Tensor q = ops::slice_cols(packed, lo, hi);
    const Tensor k = ops::slice_cols(packed, dim_ + lo, dim_ + hi);
    const Tensor v = ops::slice_cols(packed, 2 * dim_ + lo, 2 * dim_ + hi);
    const Tensor weights = ops::softmax_rows(
        ops::scale(ops::matmul(q, ops::transpose(k)), inv_sqrt));
    if (attention != nullptr) attention->push_back(weights);
    const Tensor out = ops::matmul(weights, v);
    mixed = h == 0 ? out : ops::concat_cols(mixed, out);
  }
  const Tensor after_attn = ops::add(x, proj(mixed));
  const Tensor hidden = ops::gelu(fc1(ln2(after_attn)));
  return ops::add(after_attn, fc2(hidden));
}

void TransformerBlock::collect(const std::string& prefix,
                               ParameterList& out) const {
  ln1.collect(prefix + ".ln1", out);
  qkv.collect(prefix + ".attn.qkv", out);
  proj.collect(prefix + ".attn.proj", out);
  ln2.collect(prefix + ".ln2", out);
  fc1.collect(prefix + ".mlp.fc1", out);
  fc2.collect(prefix + ".mlp.fc2", out);
}

std::uint64_t block_macs(std::uint64_t tokens, std::uint64_t dim,
                         std::uint64_t mlp_ratio) {
  return 2 * tokens * tokens * dim + 4 * tokens * dim * dim +
         2 * tokens * dim * (mlp_ratio * dim);
}

}  // namespace specsem::backbone
