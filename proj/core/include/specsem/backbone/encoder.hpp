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
#include <vector>

#include "specsem/backbone/layers.hpp"

namespace specsem::backbone {

struct EncoderConfig {
  std::size_t input_size = 224;
  std::size_t patch_size = 32;
  std::size_t depth = 4;
  std::size_t dim = 64;
  std::size_t heads = 4;
  std::size_t mlp_ratio = 4;
  std::size_t channels = 3;

  std::size_t grid() const { return input_size / patch_size; }
  std::size_t patches() const { return grid() * grid(); }
  // Class token plus one token per patch.
  std::size_t tokens() const { return patches() + 1; }
  std::size_t patch_dim() const { return channels * patch_size * patch_size; }

  // Throws ContractError when an invariant is broken.
  void validate() const;

  // Small configuration used for training and CI on 64x64 frames.
  static EncoderConfig desk(std::size_t input_size = 64);
  // ViT-B/32 shapes (224 input, 12 layers, width 768, 12 heads).
  static EncoderConfig vit_b32();
};

// Index list mapping a [C, H, W] tensor onto [patches, C p p] rows, patches
// in row-major grid order and each row ordered (c, dy, dx).
std::vector<std::size_t> patch_indices(const EncoderConfig& cfg);

// Linear patch projection, learned class token and positional embeddings.
class PatchEmbed {
 public:
  PatchEmbed() = default;
  PatchEmbed(const EncoderConfig& cfg, Rng& rng);

  // [C, H, W] -> [tokens, dim]
  Tensor operator()(const Tensor& image) const;
  void collect(const std::string& prefix, ParameterList& out) const;

  Linear proj;
  Tensor class_token;  // [1, dim]
  Tensor positions;    // [tokens, dim]

 private:
  EncoderConfig cfg_;
  std::vector<std::size_t> gather_;
};

// Patch transformer encoder exposing per-layer token features.
class Encoder {
 public:
  Encoder() = default;
  Encoder(const EncoderConfig& cfg, Rng& rng);

  const EncoderConfig& config() const { return cfg_; }
  std::size_t depth() const { return blocks_.size(); }

  Tensor embed(const Tensor& image) const { return embed_(image); }
  // Layer index is 1-based, l in [1, depth].
  Tensor block(std::size_t layer, const Tensor& tokens,
               std::vector<Tensor>* attention = nullptr) const;
  // embed followed by every block.
  Tensor forward(const Tensor& image) const;

  PatchEmbed& patch_embed() { return embed_; }
  TransformerBlock& block_at(std::size_t layer);

  ParameterList parameters(const std::string& prefix) const;

 private:
  EncoderConfig cfg_;
  PatchEmbed embed_;
  std::vector<TransformerBlock> blocks_;
};

// Class-token readout: row 0 as a [1, dim] tensor.
Tensor pool(const Tensor& tokens);
// Mean over all tokens; alternative readout.
Tensor mean_pool(const Tensor& tokens);

}  // namespace specsem::backbone
