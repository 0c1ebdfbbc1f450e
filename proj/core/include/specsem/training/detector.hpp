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
#include <vector>

#include "specsem/datagen/clip.hpp"
#include "specsem/fusion/dual_stream.hpp"
#include "specsem/temporal/head.hpp"
#include "specsem/training/config.hpp"

namespace specsem::training {

using numerics::ParameterList;
using numerics::Tensor;

// Network inputs of one frame, both [C, H, W].
struct FrameInputs {
  Tensor semantic;  // per-channel standardised raw frame
  Tensor spectral;  // per-channel standardised high-pass residual
};

struct ClipInputs {
  std::vector<FrameInputs> frames;  // the T sampled frames
};

// Per-patch maps of one frame at one layer, row-major over the patch grid.
struct FrameGateMap {
  std::vector<double> before;  // mean |F_spec-hat| over channels
  std::vector<double> gate;    // mean g over channels, in (0, 1)
  std::vector<double> after;   // mean |F_spec| after the merge
};

struct GateMaps {
  std::size_t grid = 0;
  std::size_t patch = 0;
  std::size_t layer = 0;
  std::vector<FrameGateMap> frames;  // one per clip frame
};

// Spreads a per-patch map over its patch pixels: a 1-channel image of
// extent grid * patch.
Image patch_map_image(const std::vector<double>& values, std::size_t grid,
                      std::size_t patch);

// Analytic multiply-accumulate counts of one forward pass.
struct MacCount {
  std::uint64_t block = 0;         // one encoder block
  std::uint64_t branch = 0;        // patch embedding + all blocks of one encoder
  std::uint64_t fusion = 0;        // gate MLPs or the concat projection
  std::uint64_t per_frame = 0;     // every branch the variant runs + fusion
  std::uint64_t head_per_clip = 0; // temporal layers + classifier
  std::uint64_t per_clip = 0;      // T frames + head
};
MacCount analytic_macs(const DetectorConfig& cfg);

// Dual-stream encoder plus temporal head.
class Detector {
 public:
  explicit Detector(const DetectorConfig& cfg);

  const DetectorConfig& config() const { return cfg_; }
  fusion::DualStreamEncoder& encoder() { return encoder_; }
  const fusion::DualStreamEncoder& encoder() const { return encoder_; }
  temporal::TemporalHead& head() { return head_; }
  const temporal::TemporalHead& head() const { return head_; }

  // High-pass radius in bins of the model's input grid.
  double radius_bins() const;

  // Samples T frames and builds both branch inputs. Frames must match the
  // encoder input size.
  ClipInputs prepare(const datagen::Clip& clip) const;
  FrameInputs prepare_frame(const Image& frame) const;

  // Semantic traces of every frame, computed without recording gradients.
  std::vector<fusion::SemanticTrace> semantic_traces(const ClipInputs& inputs) const;

  // Video logit [1, 1]. `cached` supplies precomputed semantic traces.
  Tensor logit(const ClipInputs& inputs,
               const std::vector<fusion::SemanticTrace>* cached = nullptr) const;

  // p(fake) without recording gradients.
  double score(const ClipInputs& inputs) const;
  double score(const datagen::Clip& clip) const;

  // Gate maps of layer `layer` (1-based) for every frame of the clip.
  // Requires the gated variant.
  GateMaps gate_maps(const datagen::Clip& clip, std::size_t layer) const;

  // Every parameter in checkpoint order.
  ParameterList parameters() const;
  // The parameters the variant and freeze flag let training update.
  ParameterList trainable_parameters() const;
  // Marks exactly the trainable parameters as requiring gradients.
  void refresh_trainable();

 private:
  DetectorConfig cfg_;
  fusion::DualStreamEncoder encoder_;
  temporal::TemporalHead head_;
};

}  // namespace specsem::training
