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

#include "specsem/backbone/encoder.hpp"

#include "specsem/errors.hpp"
#include "specsem/numerics/init.hpp"
#include "specsem/numerics/ops.hpp"

namespace specsem::backbone {

namespace ops = numerics;

void EncoderConfig::validate() const {
  if (patch_size == 0 || input_size == 0 || input_size % patch_size != 0) {
    throw ContractError("input size " + std::to_string(input_size) +
                        " is not divisible by patch size " +
                        std::to_string(patch_size));
  }
  if (depth == 0) throw ContractError("encoder depth must be at least 1");
  if (heads == 0 || dim % heads != 0) {
    throw ContractError("encoder width " + std::to_string(dim) +
                        " is not divisible by " + std::to_string(heads) +
                        " heads");
  }
  if (mlp_ratio == 0 || channels == 0) {
    throw ContractError("mlp_ratio and channels must be positive");
  }
}

EncoderConfig EncoderConfig::desk(std::size_t input_size) {
  EncoderConfig cfg;
  cfg.input_size = input_size;
  cfg.patch_size = input_size >= 224 ? 32 : 16;
  cfg.depth = 4;
  cfg.dim = 64;
  cfg.heads = 4;
  cfg.mlp_ratio = 4;
  return cfg;
}

EncoderConfig EncoderConfig::vit_b32() {
  EncoderConfig cfg;
  cfg.input_size = 224;
  cfg.patch_size = 32;
  cfg.depth = 12;
  cfg.dim = 768;
  cfg.heads = 12;
  cfg.mlp_ratio = 4;
  return cfg;
}

std::vector<std::size_t> patch_indices(const EncoderConfig& cfg) {
  const std::size_t g = cfg.grid(), p = cfg.patch_size, s = cfg.input_size;
  std::vector<std::size_t> idx;
  idx.reserve(cfg.patches() * cfg.patch_dim());
  for (std::size_t gy = 0; gy < g; ++gy)
    for (std::size_t gx = 0; gx < g; ++gx)
      for (std::size_t c = 0; c < cfg.channels; ++c)
        for (std::size_t dy = 0; dy < p; ++dy)
          for (std::size_t dx = 0; dx < p; ++dx)
            idx.push_back((c * s + gy * p + dy) * s + gx * p + dx);
  return idx;
}

PatchEmbed::PatchEmbed(const EncoderConfig& cfg, Rng& rng)
    : proj(cfg.patch_dim(), cfg.dim, rng),
      class_token(numerics::normal_init({1, cfg.dim}, 0.02, rng)),
      positions(numerics::normal_init({cfg.tokens(), cfg.dim}, 0.02, rng)),
      cfg_(cfg),
      gather_(patch_indices(cfg)) {}

Tensor PatchEmbed::operator()(const Tensor& image) const {
  const numerics::Shape expected{cfg_.channels, cfg_.input_size, cfg_.input_size};
  if (image.shape() != expected) {
    throw DimensionError("patch_embed expects " + numerics::shape_string(expected) +
                         ", got " + numerics::shape_string(image.shape()));
  }
  const Tensor patches =
      ops::gather(image, gather_, {cfg_.patches(), cfg_.patch_dim()});
  const Tensor tokens = ops::concat_rows(class_token, proj(patches));
  return ops::add(tokens, positions);
}

void PatchEmbed::collect(const std::string& prefix, ParameterList& out) const {
  proj.collect(prefix + ".proj", out);
  out.push_back({prefix + ".class_token", class_token});
  out.push_back({prefix + ".positions", positions});
}

Encoder::Encoder(const EncoderConfig& cfg, Rng& rng) : cfg_(cfg) {
  cfg.validate();
  embed_ = PatchEmbed(cfg, rng);
  blocks_.reserve(cfg.depth);
  for (std::size_t l = 0; l < cfg.depth; ++l)
    blocks_.emplace_back(cfg.dim, cfg.heads, cfg.mlp_ratio, rng);
}

Tensor Encoder::block(std::size_t layer, const Tensor& tokens,
                      std::vector<Tensor>* attention) const {
  if (layer < 1 || layer > blocks_.size()) {
    throw ContractError("layer index " + std::to_string(layer) +
                        " outside [1, " + std::to_string(blocks_.size()) + "]");
  }
  return blocks_[layer - 1].forward(tokens, attention);
}

TransformerBlock& Encoder::block_at(std::size_t layer) {
  if (layer < 1 || layer > blocks_.size()) {
    throw ContractError("layer index out of range");
  }
  return blocks_[layer - 1];
}

Tensor Encoder::forward(const Tensor& image) const {
  Tensor x = embed(image);
  for (std::size_t l = 1; l <= depth(); ++l) x = block(l, x);
  return x;
}

ParameterList Encoder::parameters(const std::string& prefix) const {
  ParameterList out;
  embed_.collect(prefix + ".embed", out);
  for (std::size_t l = 0; l < blocks_.size(); ++l)
    blocks_[l].collect(prefix + ".block" + std::to_string(l + 1), out);
  return out;
}

Tensor pool(const Tensor& tokens) { return ops::slice_rows(tokens, 0, 1); }

Tensor mean_pool(const Tensor& tokens) { return ops::mean_rows(tokens); }

}  // namespace specsem::backbone
