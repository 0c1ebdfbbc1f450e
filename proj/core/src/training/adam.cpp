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

#include "specsem/training/adam.hpp"

#include <cmath>

#include "specsem/errors.hpp"

namespace specsem::training {

void adam_step(std::span<double> value, std::span<const double> grad,
               AdamSlot& slot, std::size_t t, const OptimizerConfig& opt) {
  if (t == 0) throw ContractError("Adam step index starts at 1");
  if (slot.m.empty() && slot.v.empty()) {
    slot.m.assign(value.size(), 0.0);
    slot.v.assign(value.size(), 0.0);
  }
  if (grad.size() != value.size() || slot.m.size() != value.size() ||
      slot.v.size() != value.size()) {
    throw DimensionError("Adam: parameter, gradient and state sizes differ");
  }
  const double c1 = 1.0 - std::pow(opt.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(opt.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < value.size(); ++i) {
    const double g = grad[i] + opt.weight_decay * value[i];
    slot.m[i] = opt.beta1 * slot.m[i] + (1.0 - opt.beta1) * g;
    slot.v[i] = opt.beta2 * slot.v[i] + (1.0 - opt.beta2) * g * g;
    const double m_hat = slot.m[i] / c1;
    const double v_hat = slot.v[i] / c2;
    value[i] -= opt.lr * m_hat / (std::sqrt(v_hat) + opt.eps);
  }
}

Adam::Adam(numerics::ParameterList params, OptimizerConfig opt)
    : params_(std::move(params)), opt_(opt), slots_(params_.size()) {}

void Adam::step() {
  ++t_;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& p = params_[i].tensor;
    if (!p.has_grad()) continue;
    adam_step(p.mutable_data(), p.grad(), slots_[i], t_, opt_);
  }
}

void Adam::zero_grad() { numerics::zero_grads(params_); }

}  // namespace specsem::training
