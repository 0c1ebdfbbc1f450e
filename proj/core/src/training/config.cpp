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

#include "specsem/training/config.hpp"

#include <nlohmann/json.hpp>

#include "specsem/errors.hpp"

namespace specsem::training {

using nlohmann::json;

namespace {

// Assigns j[key] to out when present, rejecting type mismatches.
template <typename T>
void read_key(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw ParseError("unknown config key '" + where + it.key() + "'");
  }
}

}  // namespace

std::string to_string(SemanticInit init) {
  return init == SemanticInit::kPretrain ? "pretrain" : "random";
}

SemanticInit parse_semantic_init(const std::string& name) {
  if (name == "pretrain") return SemanticInit::kPretrain;
  if (name == "random") return SemanticInit::kRandom;
  throw UsageError("unknown semantic init '" + name + "' (expected pretrain or random)");
}

void DetectorConfig::validate() const {
  encoder.validate();
  head.validate();
  if (head.dim != encoder.dim) {
    throw ContractError("head dim " + std::to_string(head.dim) +
                        " differs from encoder dim " + std::to_string(encoder.dim));
  }
  if (!(radius >= 0.0)) throw ContractError("radius must be >= 0");
  if (!(optimizer.lr > 0.0)) throw ContractError("learning rate must be > 0");
  if (optimizer.weight_decay < 0.0) throw ContractError("weight decay must be >= 0");
  if (!(optimizer.beta1 >= 0.0 && optimizer.beta1 < 1.0 && optimizer.beta2 >= 0.0 &&
        optimizer.beta2 < 1.0)) {
    throw ContractError("Adam betas must lie in [0, 1)");
  }
  if (!(optimizer.eps > 0.0)) throw ContractError("Adam eps must be > 0");
  if (batch == 0) throw ContractError("batch must be >= 1");
  if (variant == fusion::AblationVariant::kSpectralOnly && !frozen_semantic) {
    throw ContractError("spectral_only does not use the semantic encoder; keep it frozen");
  }
}

DetectorConfig DetectorConfig::desk(std::size_t input_size) {
  DetectorConfig cfg;
  cfg.encoder = backbone::EncoderConfig::desk(input_size);
  cfg.head.dim = cfg.encoder.dim;
  return cfg;
}

DetectorConfig DetectorConfig::vit_b32() {
  DetectorConfig cfg;
  cfg.encoder = backbone::EncoderConfig::vit_b32();
  cfg.head.dim = cfg.encoder.dim;
  cfg.optimizer.lr = 1e-5;
  cfg.optimizer.weight_decay = 1e-4;
  cfg.batch = 16;
  cfg.epochs = 15;
  return cfg;
}

std::string config_to_json(const DetectorConfig& cfg) {
  const auto& e = cfg.encoder;
  const auto& h = cfg.head;
  const auto& o = cfg.optimizer;
  const json j = {
      {"radius", cfg.radius},
      {"variant", fusion::to_string(cfg.variant)},
      {"frozen_semantic", cfg.frozen_semantic},
      {"semantic_init", to_string(cfg.semantic_init)},
      {"pretrain_epochs", cfg.pretrain_epochs},
      {"pretrain_frames", cfg.pretrain_frames},
      {"encoder",
       {{"input_size", e.input_size},
        {"patch_size", e.patch_size},
        {"depth", e.depth},
        {"dim", e.dim},
        {"heads", e.heads},
        {"mlp_ratio", e.mlp_ratio},
        {"channels", e.channels}}},
      {"head",
       {{"kind", temporal::to_string(h.kind)},
        {"layers", h.layers},
        {"heads", h.heads},
        {"ffn_ratio", h.ffn_ratio},
        {"frames", h.frames}}},
      {"optimizer",
       {{"lr", o.lr},
        {"weight_decay", o.weight_decay},
        {"beta1", o.beta1},
        {"beta2", o.beta2},
        {"eps", o.eps}}},
      {"batch", cfg.batch},
      {"epochs", cfg.epochs},
      {"seed", cfg.seed}};
  return j.dump(2);
}

DetectorConfig config_from_json(const std::string& text, const DetectorConfig& base) {
  DetectorConfig cfg = base;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw ParseError("config must be a JSON object");
    reject_unknown(j,
                   {"radius", "variant", "frozen_semantic", "semantic_init",
                    "pretrain_epochs", "pretrain_frames", "encoder", "head", "optimizer",
                    "batch", "epochs", "seed"},
                   "");
    read_key(j, "radius", cfg.radius);
    if (j.contains("variant")) cfg.variant = fusion::parse_variant(j["variant"].get<std::string>());
    read_key(j, "frozen_semantic", cfg.frozen_semantic);
    if (j.contains("semantic_init"))
      cfg.semantic_init = parse_semantic_init(j["semantic_init"].get<std::string>());
    read_key(j, "pretrain_epochs", cfg.pretrain_epochs);
    read_key(j, "pretrain_frames", cfg.pretrain_frames);
    if (j.contains("encoder")) {
      const json& e = j["encoder"];
      reject_unknown(e, {"input_size", "patch_size", "depth", "dim", "heads", "mlp_ratio", "channels"},
                     "encoder.");
      read_key(e, "input_size", cfg.encoder.input_size);
      read_key(e, "patch_size", cfg.encoder.patch_size);
      read_key(e, "depth", cfg.encoder.depth);
      read_key(e, "dim", cfg.encoder.dim);
      read_key(e, "heads", cfg.encoder.heads);
      read_key(e, "mlp_ratio", cfg.encoder.mlp_ratio);
      read_key(e, "channels", cfg.encoder.channels);
    }
    if (j.contains("head")) {
      const json& h = j["head"];
      reject_unknown(h, {"kind", "layers", "heads", "ffn_ratio", "frames"}, "head.");
      if (h.contains("kind")) cfg.head.kind = temporal::parse_head_kind(h["kind"].get<std::string>());
      read_key(h, "layers", cfg.head.layers);
      read_key(h, "heads", cfg.head.heads);
      read_key(h, "ffn_ratio", cfg.head.ffn_ratio);
      read_key(h, "frames", cfg.head.frames);
    }
    if (j.contains("optimizer")) {
      const json& o = j["optimizer"];
      reject_unknown(o, {"lr", "weight_decay", "beta1", "beta2", "eps"}, "optimizer.");
      read_key(o, "lr", cfg.optimizer.lr);
      read_key(o, "weight_decay", cfg.optimizer.weight_decay);
      read_key(o, "beta1", cfg.optimizer.beta1);
      read_key(o, "beta2", cfg.optimizer.beta2);
      read_key(o, "eps", cfg.optimizer.eps);
    }
    read_key(j, "batch", cfg.batch);
    read_key(j, "epochs", cfg.epochs);
    read_key(j, "seed", cfg.seed);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed config: ") + ex.what());
  } catch (const UsageError& ex) {
    throw ParseError(std::string("malformed config: ") + ex.what());
  }
  cfg.head.dim = cfg.encoder.dim;
  return cfg;
}

std::uint64_t config_hash(const DetectorConfig& cfg) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : config_to_json(cfg)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace specsem::training
