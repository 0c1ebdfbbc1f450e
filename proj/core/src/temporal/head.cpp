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

#include "specsem/temporal/head.hpp"

#include <cmath>

#include "specsem/errors.hpp"
#include "specsem/numerics/init.hpp"
#include "specsem/numerics/ops.hpp"

namespace specsem::temporal {

namespace ops = numerics;

std::string to_string(HeadKind kind) {
  return kind == HeadKind::kTransformer ? "transformer" : "mean";
}

HeadKind parse_head_kind(const std::string& name) {
  if (name == "transformer") return HeadKind::kTransformer;
  if (name == "mean" || name == "mean_pool") return HeadKind::kMeanPool;
  throw UsageError("unknown head '" + name + "' (expected transformer or mean)");
}

void HeadConfig::validate() const {
  if (frames == 0) throw ContractError("head needs at least one frame");
  if (kind == HeadKind::kTransformer && (heads == 0 || dim % heads != 0)) {
    throw ContractError("head width " + std::to_string(dim) +
                        " is not divisible by " + std::to_string(heads) +
                        " heads");
  }
}

std::vector<std::size_t> sample_frame_indices(std::size_t available,
                                              std::size_t frames) {
  if (available == 0 || frames == 0) {
    throw DataError("cannot sample frames from an empty clip");
  }
  std::vector<std::size_t> idx(frames);
  for (std::size_t k = 0; k < frames; ++k) idx[k] = k * available / frames;
  return idx;
}

TemporalHead::TemporalHead(const HeadConfig& cfg, Rng& rng) : cfg_(cfg) {
  cfg.validate();
  positions_ = numerics::normal_init({cfg.frames, cfg.dim}, 0.02, rng);
  if (cfg.kind == HeadKind::kTransformer) {
    for (std::size_t i = 0; i < cfg.layers; ++i)
      layers_.emplace_back(cfg.dim, cfg.heads, cfg.ffn_ratio, rng);
  }
  classifier_ = Linear::zeros(cfg.dim, 1);
}

Tensor TemporalHead::aggregate(const Tensor& frames) const {
  if (frames.rank() != 2 || frames.dim(0) != cfg_.frames ||
      frames.dim(1) != cfg_.dim) {
    throw DimensionError("temporal head expects [" + std::to_string(cfg_.frames) +
                         "," + std::to_string(cfg_.dim) + "], got " +
                         numerics::shape_string(frames.shape()));
  }
  if (cfg_.kind == HeadKind::kMeanPool) return ops::mean_rows(frames);
  Tensor x = ops::add(frames, positions_);
  for (const auto& block : layers_) x = block(x);
  return ops::mean_rows(x);
}

Tensor TemporalHead::logit(const Tensor& pooled) const {
  return classifier_(pooled);
}

double TemporalHead::classify(const Tensor& pooled) const {
  const double z = logit(pooled).item();
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

ParameterList TemporalHead::parameters(const std::string& prefix) const {
  ParameterList out;
  if (cfg_.kind == HeadKind::kTransformer) {
    out.push_back({prefix + ".positions", positions_});
    for (std::size_t i = 0; i < layers_.size(); ++i)
      layers_[i].collect(prefix + ".layer" + std::to_string(i + 1), out);
  }
  classifier_.collect(prefix + ".classifier", out);
  return out;
}

}  // namespace specsem::temporal
