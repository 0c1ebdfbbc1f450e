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

#include <string>
#include <vector>

#include "specsem/backbone/layers.hpp"

namespace specsem::temporal {

using backbone::Linear;
using numerics::ParameterList;
using numerics::Tensor;

enum class HeadKind { kTransformer, kMeanPool };

std::string to_string(HeadKind kind);
HeadKind parse_head_kind(const std::string& name);  // "transformer" | "mean"

struct HeadConfig {
  HeadKind kind = HeadKind::kTransformer;
  std::size_t layers = 2;
  std::size_t heads = 8;
  std::size_t ffn_ratio = 4;
  std::size_t frames = 8;
  std::size_t dim = 64;

  void validate() const;
};

// Frame indices floor(k * available / frames), k = 0..frames-1.
std::vector<std::size_t> sample_frame_indices(std::size_t available,
                                              std::size_t frames);

// Video-level aggregation of per-frame features and the final classifier.
class TemporalHead {
 public:
  TemporalHead() = default;
  TemporalHead(const HeadConfig& cfg, Rng& rng);

  const HeadConfig& config() const { return cfg_; }

  // [T, d] -> [1, d]. Transformer kind: add temporal positions, run the
  // encoder layers, average the T outputs. Mean kind: average the rows.
  Tensor aggregate(const Tensor& frames) const;
  // [1, d] -> [1, 1] logit of the single linear classifier.
  Tensor logit(const Tensor& pooled) const;
  // sigmoid(logit), as a plain probability.
  double classify(const Tensor& pooled) const;

  Tensor& positions() { return positions_; }
  backbone::TransformerBlock& layer(std::size_t i) { return layers_.at(i); }
  Linear& classifier() { return classifier_; }

  ParameterList parameters(const std::string& prefix) const;

 private:
  HeadConfig cfg_;
  Tensor positions_;  // [T, d]
  std::vector<backbone::TransformerBlock> layers_;
  Linear classifier_;  // d -> 1, zero-initialised
};

}  // namespace specsem::temporal
