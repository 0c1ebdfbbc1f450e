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

#include <optional>
#include <string>
#include <vector>

#include "specsem/backbone/encoder.hpp"
#include "specsem/fusion/gate.hpp"

namespace specsem::fusion {

enum class AblationVariant { kSemanticOnly, kSpectralOnly, kConcatNoGate, kGated };

std::string to_string(AblationVariant variant);
// Accepts the canonical names and the short forms sem, spec, concat, gated.
AblationVariant parse_variant(const std::string& name);
const std::vector<AblationVariant>& all_variants();

// Semantic token features after each block, F_sem^(l+1) for l = 1..L.
// Computed once per frame and reused when the semantic encoder is frozen.
struct SemanticTrace {
  std::vector<Tensor> layers;
  Tensor pooled() const;
};

// Intermediate quantities of a gated forward pass for inspection.
struct FusionTrace {
  std::vector<Tensor> spectral_before;  // F_spec-hat^(l), one per layer
  std::vector<Tensor> gates;            // g^(l)
  std::vector<Tensor> spectral_after;   // F_spec^(l+1)
};

// Semantic and spectral encoders joined by the per-layer gated merge, plus
// the late-fusion projection used by the concat ablation.
class DualStreamEncoder {
 public:
  DualStreamEncoder() = default;
  DualStreamEncoder(const backbone::EncoderConfig& cfg, AblationVariant variant,
                    Rng& rng);

  AblationVariant variant() const { return variant_; }
  const backbone::EncoderConfig& config() const { return cfg_; }

  bool uses_semantic() const;
  bool uses_spectral() const;

  SemanticTrace trace_semantic(const Tensor& frame_semantic) const;

  // Frame feature h = Pool(...) as a [1, d] tensor.
  Tensor forward(const Tensor& frame_semantic, const Tensor& frame_spectral) const;
  Tensor forward(const SemanticTrace& semantic, const Tensor& frame_spectral,
                 FusionTrace* trace = nullptr) const;

  Tensor gate(std::size_t layer, const Tensor& semantic_hat,
              const Tensor& spectral_hat) const;

  backbone::Encoder& semantic_encoder() { return semantic_; }
  backbone::Encoder& spectral_encoder() { return spectral_; }
  const backbone::Encoder& semantic_encoder() const { return semantic_; }
  const backbone::Encoder& spectral_encoder() const { return spectral_; }
  GateBlock& gate_block(std::size_t layer) { return gates_.at(layer - 1); }
  Linear& concat_projection() { return concat_proj_; }

  ParameterList semantic_parameters() const;
  // Everything except the semantic encoder.
  ParameterList trainable_parameters() const;
  ParameterList parameters() const;

 private:
  backbone::EncoderConfig cfg_;
  AblationVariant variant_ = AblationVariant::kGated;
  backbone::Encoder semantic_;
  backbone::Encoder spectral_;
  std::vector<GateBlock> gates_;
  Linear concat_proj_;
};

}  // namespace specsem::fusion
