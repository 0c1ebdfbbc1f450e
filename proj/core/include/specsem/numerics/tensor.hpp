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
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace specsem::numerics {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_string(const Shape& shape);

// Storage shared between a Tensor handle and the tape that references it.
struct TensorNode {
  Shape shape;
  std::vector<double> data;
  std::vector<double> grad;  // empty until a gradient is accumulated
  bool requires_grad = false;

  void accumulate_grad(std::span<const double> g);
};

// Dense row-major float64 array. Copies of a Tensor share storage; every
// primitive in ops.hpp returns a fresh tensor and never writes into its
// inputs. Leaves created with requires_grad take part in reverse-mode
// differentiation when a Tape is active.
class Tensor {
 public:
  Tensor();
  Tensor(Shape shape, std::vector<double> data, bool requires_grad = false);

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  static Tensor from_rows(const std::vector<std::vector<double>>& rows);

  const Shape& shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t numel() const { return node_->data.size(); }
  // Extent of the last axis; the leading axes are flattened into rows.
  std::size_t cols() const;
  std::size_t rows() const;

  std::span<const double> data() const { return node_->data; }
  // Write access for leaves (initialisers, optimisers, loaders). Never used
  // on tape-produced tensors.
  std::span<double> mutable_data() { return node_->data; }

  double item() const;
  double at(std::size_t flat) const { return node_->data[flat]; }
  double at(std::size_t row, std::size_t col) const;

  bool requires_grad() const { return node_->requires_grad; }
  void set_requires_grad(bool value) { node_->requires_grad = value; }

  bool has_grad() const { return !node_->grad.empty(); }
  // Zero-filled span of numel() entries when no gradient was accumulated.
  std::span<const double> grad() const;
  void zero_grad() { node_->grad.clear(); }

  Tensor detach() const;
  Tensor reshape(Shape shape) const;

  const std::shared_ptr<TensorNode>& node() const { return node_; }
  explicit Tensor(std::shared_ptr<TensorNode> node);

 private:
  std::shared_ptr<TensorNode> node_;
};

}  // namespace specsem::numerics
