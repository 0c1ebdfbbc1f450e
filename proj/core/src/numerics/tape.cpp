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

#include "specsem/numerics/tape.hpp"

#include "specsem/errors.hpp"

namespace specsem::numerics {

namespace {
thread_local Tape* g_active_tape = nullptr;
}

Tape* Tape::active() { return g_active_tape; }

Tape::Scope::Scope(Tape& tape) : previous_(g_active_tape) {
  g_active_tape = &tape;
}

Tape::Scope::~Scope() { g_active_tape = previous_; }

NoGradGuard::NoGradGuard() : previous_(g_active_tape) {
  g_active_tape = nullptr;
}

NoGradGuard::~NoGradGuard() { g_active_tape = previous_; }

void Tape::record(std::shared_ptr<TensorNode> output, BackwardFn backward) {
  entries_.push_back({std::move(output), std::move(backward)});
}

void Tape::backward(const Tensor& loss, double seed) {
  if (loss.numel() != 1) {
    throw ContractError("backward needs a scalar loss, got shape " +
                        shape_string(loss.shape()));
  }
  if (entries_.empty()) throw ContractError("backward on an empty tape");
  if (!loss.requires_grad()) {
    throw ContractError("loss does not depend on any trainable tensor");
  }
  const double seed_grad[1] = {seed};
  loss.node()->accumulate_grad(seed_grad);
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->output->grad.empty()) continue;  // not on a path to the loss
    it->backward(*it->output);
  }
  // Interior nodes keep their gradients only until the tape is dropped.
  entries_.clear();
}

}  // namespace specsem::numerics
