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

#include "specsem/training/detector.hpp"

#include <cmath>

#include "specsem/errors.hpp"
#include "specsem/numerics/ops.hpp"
#include "specsem/numerics/tape.hpp"
#include "specsem/spectral/residual.hpp"

namespace specsem::training {

namespace ops = numerics;
using fusion::AblationVariant;

namespace {

constexpr std::uint64_t kEncoderStream = 11;
constexpr std::uint64_t kHeadStream = 12;

// Channel mean of |x| (or x) for each patch token, skipping the class token.
std::vector<double> token_means(const Tensor& tokens, bool absolute) {
  const std::size_t rows = tokens.dim(0), cols = tokens.dim(1);
  const auto data = tokens.data();
  std::vector<double> out;
  out.reserve(rows - 1);
  for (std::size_t r = 1; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = data[r * cols + c];
      acc += absolute ? std::abs(v) : v;
    }
    out.push_back(acc / static_cast<double>(cols));
  }
  return out;
}

}  // namespace

Image patch_map_image(const std::vector<double>& values, std::size_t grid,
                      std::size_t patch) {
  if (values.size() != grid * grid) {
    throw DimensionError("patch map has " + std::to_string(values.size()) +
                         " values for a " + std::to_string(grid) + "x" +
                         std::to_string(grid) + " grid");
  }
  Image img(1, grid * patch, grid * patch);
  for (std::size_t y = 0; y < img.height; ++y)
    for (std::size_t x = 0; x < img.width; ++x)
      img.at(0, y, x) = values[(y / patch) * grid + x / patch];
  return img;
}

MacCount analytic_macs(const DetectorConfig& cfg) {
  const auto& e = cfg.encoder;
  const std::uint64_t d = e.dim, tokens = e.tokens();
  MacCount m;
  m.block = backbone::block_macs(tokens, d, e.mlp_ratio);
  m.branch = e.patches() * e.patch_dim() * d + e.depth * m.block;
  switch (cfg.variant) {
    case AblationVariant::kGated: m.fusion = e.depth * tokens * (2 * d * d + d * d); break;
    case AblationVariant::kConcatNoGate: m.fusion = 2 * d * d; break;
    default: m.fusion = 0; break;
  }
  const bool both = cfg.variant == AblationVariant::kGated ||
                    cfg.variant == AblationVariant::kConcatNoGate;
  m.per_frame = (both ? 2 : 1) * m.branch + m.fusion;
  const auto& h = cfg.head;
  m.head_per_clip = d;
  if (h.kind == temporal::HeadKind::kTransformer)
    m.head_per_clip += h.layers * backbone::block_macs(h.frames, d, h.ffn_ratio);
  m.per_clip = h.frames * m.per_frame + m.head_per_clip;
  return m;
}

Detector::Detector(const DetectorConfig& cfg) : cfg_(cfg) {
  cfg_.head.dim = cfg_.encoder.dim;
  cfg_.validate();
  Rng enc_rng(cfg_.seed, kEncoderStream);
  encoder_ = fusion::DualStreamEncoder(cfg_.encoder, cfg_.variant, enc_rng);
  Rng head_rng(cfg_.seed, kHeadStream);
  head_ = temporal::TemporalHead(cfg_.head, head_rng);
  // Weights live at float32 precision so checkpoints reproduce them exactly.
  numerics::round_to_float32(parameters());
  refresh_trainable();
}

double Detector::radius_bins() const {
  return spectral::radius_for_size(cfg_.radius, cfg_.encoder.input_size);
}

FrameInputs Detector::prepare_frame(const Image& frame) const {
  const auto& e = cfg_.encoder;
  if (frame.channels != e.channels || frame.height != e.input_size ||
      frame.width != e.input_size) {
    throw DimensionError("frame is " + std::to_string(frame.channels) + "x" +
                         std::to_string(frame.height) + "x" + std::to_string(frame.width) +
                         ", model expects " + std::to_string(e.channels) + "x" +
                         std::to_string(e.input_size) + "x" + std::to_string(e.input_size));
  }
  FrameInputs in;
  in.semantic = spectral::standardize_channels(frame);
  in.spectral = spectral::normalize_residual(spectral::extract_residual(frame, radius_bins()));
  return in;
}

ClipInputs Detector::prepare(const datagen::Clip& clip) const {
  ClipInputs out;
  for (std::size_t idx : temporal::sample_frame_indices(clip.frames.size(), cfg_.head.frames))
    out.frames.push_back(prepare_frame(clip.frames[idx]));
  return out;
}

std::vector<fusion::SemanticTrace> Detector::semantic_traces(const ClipInputs& inputs) const {
  numerics::NoGradGuard guard;
  std::vector<fusion::SemanticTrace> out;
  out.reserve(inputs.frames.size());
  for (const auto& f : inputs.frames) out.push_back(encoder_.trace_semantic(f.semantic));
  return out;
}

Tensor Detector::logit(const ClipInputs& inputs,
                       const std::vector<fusion::SemanticTrace>* cached) const {
  if (inputs.frames.empty()) throw DataError("clip has no frames");
  if (cached != nullptr && cached->size() != inputs.frames.size()) {
    throw ContractError("semantic cache does not match the clip");
  }
  Tensor features;
  for (std::size_t t = 0; t < inputs.frames.size(); ++t) {
    const auto& f = inputs.frames[t];
    fusion::SemanticTrace local;
    const fusion::SemanticTrace* trace = nullptr;
    if (encoder_.uses_semantic()) {
      if (cached != nullptr) {
        trace = &(*cached)[t];
      } else {
        local = encoder_.trace_semantic(f.semantic);
        trace = &local;
      }
    } else {
      trace = &local;
    }
    const Tensor h = encoder_.forward(*trace, f.spectral);
    features = t == 0 ? h : ops::concat_rows(features, h);
  }
  return head_.logit(head_.aggregate(features));
}

double Detector::score(const ClipInputs& inputs) const {
  numerics::NoGradGuard guard;
  const double z = logit(inputs).item();
  return 1.0 / (1.0 + std::exp(-z));
}

double Detector::score(const datagen::Clip& clip) const { return score(prepare(clip)); }

GateMaps Detector::gate_maps(const datagen::Clip& clip, std::size_t layer) const {
  if (cfg_.variant != AblationVariant::kGated) {
    throw ModelError("gate maps need a gated-variant model, this one is " +
                     fusion::to_string(cfg_.variant));
  }
  if (layer < 1 || layer > cfg_.encoder.depth) {
    throw UsageError("layer must be in [1, " + std::to_string(cfg_.encoder.depth) + "]");
  }
  numerics::NoGradGuard guard;
  GateMaps maps;
  maps.grid = cfg_.encoder.grid();
  maps.patch = cfg_.encoder.patch_size;
  maps.layer = layer;
  for (const Image& frame : clip.frames) {
    const FrameInputs in = prepare_frame(frame);
    fusion::FusionTrace trace;
    encoder_.forward(encoder_.trace_semantic(in.semantic), in.spectral, &trace);
    FrameGateMap m;
    m.before = token_means(trace.spectral_before[layer - 1], true);
    m.gate = token_means(trace.gates[layer - 1], false);
    m.after = token_means(trace.spectral_after[layer - 1], true);
    maps.frames.push_back(std::move(m));
  }
  return maps;
}

ParameterList Detector::parameters() const {
  ParameterList out = encoder_.parameters();
  for (auto& p : head_.parameters("head")) out.push_back(std::move(p));
  return out;
}

ParameterList Detector::trainable_parameters() const {
  ParameterList out;
  auto append = [&out](ParameterList more) {
    for (auto& p : more) out.push_back(std::move(p));
  };
  if (encoder_.uses_semantic() && !cfg_.frozen_semantic) append(encoder_.semantic_parameters());
  for (auto& p : encoder_.trainable_parameters()) {
    const bool is_gate = p.name.rfind("gate", 0) == 0;
    const bool is_concat = p.name.rfind("concat_proj", 0) == 0;
    const bool is_spectral = p.name.rfind("spectral", 0) == 0;
    if ((is_gate && cfg_.variant == AblationVariant::kGated) ||
        (is_concat && cfg_.variant == AblationVariant::kConcatNoGate) ||
        (is_spectral && encoder_.uses_spectral())) {
      out.push_back(std::move(p));
    }
  }
  append(head_.parameters("head"));
  return out;
}

void Detector::refresh_trainable() {
  numerics::set_requires_grad(parameters(), false);
  numerics::set_requires_grad(trainable_parameters(), true);
}

}  // namespace specsem::training
