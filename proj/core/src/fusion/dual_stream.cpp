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

#include "specsem/fusion/dual_stream.hpp"

#include "specsem/errors.hpp"
#include "specsem/numerics/ops.hpp"

namespace specsem::fusion {

namespace ops = numerics;

std::string to_string(AblationVariant variant) {
  switch (variant) {
    case AblationVariant::kSemanticOnly: return "semantic_only";
    case AblationVariant::kSpectralOnly: return "spectral_only";
    case AblationVariant::kConcatNoGate: return "concat_no_gate";
    case AblationVariant::kGated: return "gated";
  }
  return "unknown";
}

AblationVariant parse_variant(const std::string& name) {
  if (name == "semantic_only" || name == "semantic-only" || name == "sem")
    return AblationVariant::kSemanticOnly;
  if (name == "spectral_only" || name == "spectral-only" || name == "spec")
    return AblationVariant::kSpectralOnly;
  if (name == "concat_no_gate" || name == "concat-no-gate" || name == "concat")
    return AblationVariant::kConcatNoGate;
  if (name == "gated") return AblationVariant::kGated;
  throw UsageError("unknown variant '" + name +
                   "' (expected sem, spec, concat or gated)");
}

const std::vector<AblationVariant>& all_variants() {
  static const std::vector<AblationVariant> variants = {
      AblationVariant::kSemanticOnly, AblationVariant::kSpectralOnly,
      AblationVariant::kConcatNoGate, AblationVariant::kGated};
  return variants;
}

Tensor SemanticTrace::pooled() const { return backbone::pool(layers.back()); }

DualStreamEncoder::DualStreamEncoder(const backbone::EncoderConfig& cfg,
                                     AblationVariant variant, Rng& rng)
    : cfg_(cfg), variant_(variant) {
  // Both encoders are always built so that parameter layouts (and hence
  // checkpoints and seeded initial weights) do not depend on the variant.
  semantic_ = backbone::Encoder(cfg, rng);
  spectral_ = backbone::Encoder(cfg, rng);
  gates_.reserve(cfg.depth);
  for (std::size_t l = 0; l < cfg.depth; ++l) gates_.emplace_back(cfg.dim, rng);
  concat_proj_ = Linear(2 * cfg.dim, cfg.dim, rng);
}

bool DualStreamEncoder::uses_semantic() const {
  return variant_ != AblationVariant::kSpectralOnly;
}

bool DualStreamEncoder::uses_spectral() const {
  return variant_ != AblationVariant::kSemanticOnly;
}

SemanticTrace DualStreamEncoder::trace_semantic(const Tensor& frame_semantic) const {
  SemanticTrace trace;
  Tensor x = semantic_.embed(frame_semantic);
  for (std::size_t l = 1; l <= semantic_.depth(); ++l) {
    x = semantic_.block(l, x);
    trace.layers.push_back(x);
  }
  return trace;
}

Tensor DualStreamEncoder::gate(std::size_t layer, const Tensor& semantic_hat,
                               const Tensor& spectral_hat) const {
  if (layer < 1 || layer > gates_.size()) {
    throw ContractError("gate layer out of range");
  }
  return gates_[layer - 1](semantic_hat, spectral_hat);
}

Tensor DualStreamEncoder::forward(const Tensor& frame_semantic,
                                  const Tensor& frame_spectral) const {
  SemanticTrace semantic;
  if (uses_semantic()) semantic = trace_semantic(frame_semantic);
  return forward(semantic, frame_spectral);
}

Tensor DualStreamEncoder::forward(const SemanticTrace& semantic,
                                  const Tensor& frame_spectral,
                                  FusionTrace* trace) const {
  switch (variant_) {
    case AblationVariant::kSemanticOnly:
      return semantic.pooled();
    case AblationVariant::kSpectralOnly:
      return backbone::pool(spectral_.forward(frame_spectral));
    case AblationVariant::kConcatNoGate: {
      const Tensor spec = backbone::pool(spectral_.forward(frame_spectral));
      return concat_proj_(ops::concat_cols(semantic.pooled(), spec));
    }
    case AblationVariant::kGated:
      break;
  }
  if (semantic.layers.size() != spectral_.depth()) {
    throw ContractError("semantic trace has " +
                        std::to_string(semantic.layers.size()) +
                        " layers, encoder has " +
                        std::to_string(spectral_.depth()));
  }
  Tensor spec = spectral_.embed(frame_spectral);
  for (std::size_t l = 1; l <= spectral_.depth(); ++l) {
    const Tensor& sem_hat = semantic.layers[l - 1];
    const Tensor spec_hat = spectral_.block(l, spec);
    const Tensor g = gate(l, sem_hat, spec_hat);
    LayerState next = merge(l, g, sem_hat, spec_hat);
    if (trace != nullptr) {
      trace->spectral_before.push_back(spec_hat);
      trace->gates.push_back(g);
      trace->spectral_after.push_back(next.spectral);
    }
    spec = next.spectral;
  }
  return backbone::pool(spec);
}

ParameterList DualStreamEncoder::semantic_parameters() const {
  return semantic_.parameters("semantic");
}

ParameterList DualStreamEncoder::trainable_parameters() const {
  ParameterList out = spectral_.parameters("spectral");
  for (std::size_t l = 0; l < gates_.size(); ++l)
    gates_[l].collect("gate" + std::to_string(l + 1), out);
  concat_proj_.collect("concat_proj", out);
  return out;
}

ParameterList DualStreamEncoder::parameters() const {
  ParameterList out = semantic_parameters();
  for (auto& p : trainable_parameters()) out.push_back(std::move(p));
  return out;
}

}  // namespace specsem::fusion
