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
#include <vector>

#include "specsem/numerics/tensor.hpp"

// Differentiable primitives. Binary elementwise operations require equal
// shapes; the only implicit expansion is scalar scaling (scale) and the
// explicit per-row bias add (add_bias). Matrix operations treat a tensor as
// rows x cols, flattening leading axes into rows.
namespace specsem::numerics {

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);

Tensor sigmoid(const Tensor& a);
// Exact (erf-based) GELU.
Tensor gelu(const Tensor& a);
Tensor exp(const Tensor& a);
// Throws DomainError for non-positive entries.
Tensor log(const Tensor& a);

enum class ElementwiseOp { kAdd, kSub, kMul, kSigmoid, kGelu, kExp, kLog };
Tensor elementwise(ElementwiseOp op, const Tensor& a);
Tensor elementwise(ElementwiseOp op, const Tensor& a, const Tensor& b);

// Row-wise softmax over the last axis with max subtraction.
Tensor softmax_rows(const Tensor& a);

// Per-row normalisation over the last axis followed by gamma/beta affine.
Tensor layernorm(const Tensor& a, const Tensor& gamma, const Tensor& beta,
                 double eps = 1e-5);

// a[rows, n] + bias[n] added to every row.
Tensor add_bias(const Tensor& a, const Tensor& bias);

Tensor concat_cols(const Tensor& a, const Tensor& b);
Tensor concat_rows(const Tensor& a, const Tensor& b);
// Columns [begin, end) / rows [begin, end) of a matrix view.
Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end);
Tensor slice_rows(const Tensor& a, std::size_t begin, std::size_t end);

// Mean over rows: [rows, n] -> [1, n].
Tensor mean_rows(const Tensor& a);
// Sum of all entries -> scalar.
Tensor sum(const Tensor& a);
// Differentiable reshape (copies).
Tensor reshape(const Tensor& a, Shape shape);

// Binary cross-entropy on a scalar logit, computed in log space.
// Gradient w.r.t. the logit is sigmoid(logit) - target.
Tensor bce_with_logits(const Tensor& logit, double target);

// Negative log-softmax of the entry `label` of a single row of logits.
Tensor cross_entropy(const Tensor& logits, std::size_t label);

}  // namespace specsem::numerics

namespace specsem::numerics {

// out[i] = a[indices[i]] reshaped to `shape`; backward scatter-adds.
Tensor gather(const Tensor& a, const std::vector<std::size_t>& indices,
              Shape shape);

}  // namespace specsem::numerics
