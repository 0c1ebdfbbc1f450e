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

#include "specsem/backbone/encoder.hpp"
#include "specsem/fusion/dual_stream.hpp"
#include "specsem/temporal/head.hpp"

namespace specsem::training {

struct OptimizerConfig {
  double lr = 3e-4;
  double weight_decay = 1e-4;  // coupled L2: grad += weight_decay * w
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

enum class SemanticInit { kPretrain, kRandom };
std::string to_string(SemanticInit init);
SemanticInit parse_semantic_init(const std::string& name);

struct DetectorConfig {
  // High-pass radius in bins of the 224-pixel reference grid.
  double radius = 32.0;
  backbone::EncoderConfig encoder = backbone::EncoderConfig::desk();
  temporal::HeadConfig head;
  fusion::AblationVariant variant = fusion::AblationVariant::kGated;
  bool frozen_semantic = true;
  SemanticInit semantic_init = SemanticInit::kPretrain;
  std::size_t pretrain_epochs = 2;
  std::size_t pretrain_frames = 128;
  OptimizerConfig optimizer;
  std::size_t batch = 4;
  std::size_t epochs = 20;
  std::uint64_t seed = 1;

  // Throws ContractError on an inconsistent configuration.
  void validate() const;

  // 64x64 frames, patch 16, L=4, d=64, 4 heads; 8-frame transformer head.
  static DetectorConfig desk(std::size_t input_size = 64);
  // ViT-B/32 encoder shapes with a large-scale optimisation protocol:
  // lr 1e-5, weight decay 1e-4, batch 16, 15 epochs, 224x224 frames.
  static DetectorConfig vit_b32();
};

// Canonical JSON (sorted keys, round-trip doubles).
std::string config_to_json(const DetectorConfig& cfg);
// Keys absent from `text` keep the values of `base`; unknown keys and
// ill-typed values raise ParseError.
DetectorConfig config_from_json(const std::string& text,
                                const DetectorConfig& base = DetectorConfig::desk());
// FNV-1a of the canonical JSON.
std::uint64_t config_hash(const DetectorConfig& cfg);

}  // namespace specsem::training
