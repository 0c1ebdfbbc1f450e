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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gradcheck.hpp"
#include "reference_model.hpp"
#include "specsem/backbone/encoder.hpp"
#include "specsem/errors.hpp"
#include "specsem/fusion/dual_stream.hpp"
#include "specsem/fusion/gate.hpp"
#include "specsem/numerics/init.hpp"
#include "specsem/numerics/ops.hpp"
#include "specsem/numerics/parameters.hpp"
#include "specsem/temporal/head.hpp"

namespace specsem {
namespace {

using backbone::EncoderConfig;
using fusion::AblationVariant;
using numerics::Tensor;
using testing::random_tensor;

EncoderConfig tiny() {
  EncoderConfig cfg;
  cfg.input_size = 16;
  cfg.patch_size = 4;
  cfg.depth = 2;
  cfg.dim = 8;
  cfg.heads = 2;
  cfg.mlp_ratio = 2;
  return cfg;
}

void fill(Tensor t, double value) {
  for (auto& v : t.mutable_data()) v = value;
}

void randomize(Tensor t, Rng& rng, double scale) {
  for (auto& v : t.mutable_data()) v = rng.uniform(-scale, scale);
}

// ---- backbone ----

TEST(EncoderConfig, DerivedShapes) {
  const auto desk = EncoderConfig::desk(64);
  EXPECT_EQ(desk.tokens(), 17u);
  EXPECT_EQ(desk.patch_dim(), 3u * 16 * 16);
  const auto big = EncoderConfig::vit_b32();
  EXPECT_EQ(big.tokens(), 50u);
  EXPECT_EQ(big.dim, 768u);
  EXPECT_EQ(big.depth, 12u);
}

TEST(EncoderConfig, RejectsBrokenInvariants) {
  auto cfg = tiny();
  cfg.patch_size = 5;
  EXPECT_THROW(cfg.validate(), ContractError);
  cfg = tiny();
  cfg.heads = 3;
  EXPECT_THROW(cfg.validate(), ContractError);
  cfg = tiny();
  cfg.depth = 0;
  EXPECT_THROW(cfg.validate(), ContractError);
}

TEST(PatchEmbed, GatherOrderMatchesLoopOracle) {
  const auto cfg = tiny();
  const auto idx = backbone::patch_indices(cfg);
  ASSERT_EQ(idx.size(), cfg.patches() * cfg.patch_dim());
  std::size_t k = 0;
  for (std::size_t gy = 0; gy < 4; ++gy)
    for (std::size_t gx = 0; gx < 4; ++gx)
      for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t dy = 0; dy < 4; ++dy)
          for (std::size_t dx = 0; dx < 4; ++dx)
            ASSERT_EQ(idx[k++], (c * 16 + gy * 4 + dy) * 16 + gx * 4 + dx);
  auto sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) ASSERT_EQ(sorted[i], i);
}

TEST(PatchEmbed, MatchesReference) {
  Rng rng(1);
  const auto cfg = tiny();
  backbone::Encoder enc(cfg, rng);
  const Tensor img = random_tensor({3, 16, 16}, rng);
  const Tensor got = enc.embed(img);
  const auto ref = testing::ref_embed(img, enc.patch_embed(), cfg);
  ASSERT_EQ(got.rows(), 17u);
  for (std::size_t r = 0; r < 17; ++r)
    for (std::size_t c = 0; c < 8; ++c) EXPECT_NEAR(got.at(r, c), ref[r][c], 1e-12);
  EXPECT_THROW(enc.embed(random_tensor({3, 8, 8}, rng)), DimensionError);
}

TEST(TransformerBlock, MatchesReference) {
  Rng rng(2);
  backbone::TransformerBlock block(8, 2, 2, rng);
  randomize(block.ln1.gamma, rng, 1.5);
  randomize(block.ln2.beta, rng, 0.5);
  randomize(block.qkv.bias, rng, 0.3);
  const Tensor x = random_tensor({5, 8}, rng, -2.0, 2.0);
  const Tensor y = block(x);
  const auto ref = testing::ref_block(testing::to_mat(x), block);
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < 8; ++c) EXPECT_NEAR(y.at(r, c), ref[r][c], 1e-12);
}

TEST(TransformerBlock, ZeroedResidualBranchesAreIdentity) {
  Rng rng(3);
  backbone::TransformerBlock block(8, 4, 4, rng);
  fill(block.proj.weight, 0.0);
  fill(block.fc2.weight, 0.0);
  const Tensor x = random_tensor({6, 8}, rng);
  const Tensor y = block(x);
  for (std::size_t i = 0; i < x.numel(); ++i) EXPECT_EQ(y.at(i), x.at(i));
}

TEST(TransformerBlock, AttentionRowsAreDistributions) {
  Rng rng(4);
  backbone::TransformerBlock block(8, 2, 2, rng);
  std::vector<Tensor> attn;
  block.forward(random_tensor({7, 8}, rng, -3.0, 3.0), &attn);
  ASSERT_EQ(attn.size(), 2u);
  for (const auto& a : attn) {
    ASSERT_EQ(a.shape(), (numerics::Shape{7, 7}));
    for (std::size_t r = 0; r < 7; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < 7; ++c) {
        EXPECT_GE(a.at(r, c), 0.0);
        s += a.at(r, c);
      }
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
}

TEST(TransformerBlock, PermutingTokensPermutesOutputs) {
  Rng rng(5);
  backbone::TransformerBlock block(8, 2, 2, rng);
  const Tensor x = random_tensor({4, 8}, rng);
  const Tensor swapped = numerics::concat_rows(numerics::slice_rows(x, 2, 4),
                                               numerics::slice_rows(x, 0, 2));
  const Tensor a = block(x), b = block(swapped);
  for (std::size_t c = 0; c < 8; ++c) {
    EXPECT_NEAR(a.at(0, c), b.at(2, c), 1e-12);
    EXPECT_NEAR(a.at(3, c), b.at(1, c), 1e-12);
  }
}

TEST(Encoder, PoolReadsClassTokenAndLayerIndexIsChecked) {
  Rng rng(6);
  backbone::Encoder enc(tiny(), rng);
  const Tensor tokens = enc.forward(random_tensor({3, 16, 16}, rng));
  const Tensor p = backbone::pool(tokens);
  ASSERT_EQ(p.shape(), (numerics::Shape{1, 8}));
  for (std::size_t c = 0; c < 8; ++c) EXPECT_EQ(p.at(c), tokens.at(0, c));
  const Tensor m = backbone::mean_pool(tokens);
  double s = 0.0;
  for (std::size_t r = 0; r < tokens.rows(); ++r) s += tokens.at(r, 3);
  EXPECT_NEAR(m.at(3), s / static_cast<double>(tokens.rows()), 1e-14);
  EXPECT_THROW(enc.block(0, tokens), ContractError);
  EXPECT_THROW(enc.block(3, tokens), ContractError);
}

TEST(Encoder, MacFormula) {
  EXPECT_EQ(backbone::block_macs(17, 64, 4), 2ull * 17 * 17 * 64 + 4ull * 17 * 64 * 64 +
                                                 2ull * 17 * 64 * 256);
  EXPECT_EQ(backbone::block_macs(50, 768, 4), 2ull * 50 * 50 * 768 + 12ull * 50 * 768 * 768);
}

TEST(Encoder, SeededConstructionIsDeterministic) {
  Rng a(9), b(9);
  backbone::Encoder ea(tiny(), a), eb(tiny(), b);
  EXPECT_EQ(numerics::checksum(ea.parameters("e")), numerics::checksum(eb.parameters("e")));
  EXPECT_NEAR(ea.patch_embed().positions.at(0), eb.patch_embed().positions.at(0), 0.0);
}

// ---- fusion ----

TEST(Gate, FreshGateIsExactlyOneHalf) {
  Rng rng(10);
  fusion::GateBlock gate(8, rng);
  const Tensor g = gate(random_tensor({5, 8}, rng, -4, 4), random_tensor({5, 8}, rng, -4, 4));
  for (double v : g.data()) EXPECT_EQ(v, 0.5);
}

TEST(Gate, FreshMergeScalesSpectralByOneAndAHalf) {
  Rng rng(11);
  fusion::GateBlock gate(8, rng);
  const Tensor sem = random_tensor({5, 8}, rng), spec = random_tensor({5, 8}, rng);
  const auto next = fusion::merge(2, gate(sem, spec), sem, spec);
  EXPECT_EQ(next.layer, 3u);
  for (std::size_t i = 0; i < spec.numel(); ++i) EXPECT_EQ(next.spectral.at(i), 1.5 * spec.at(i));
}

TEST(Gate, SemanticStreamPassesThroughBitwise) {
  Rng rng(12);
  fusion::GateBlock gate(8, rng);
  randomize(gate.fc2.weight, rng, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Tensor sem = random_tensor({3, 8}, rng, -10, 10);
    const Tensor spec = random_tensor({3, 8}, rng, -10, 10);
    const auto next = fusion::merge(1, gate(sem, spec), sem, spec);
    for (std::size_t i = 0; i < sem.numel(); ++i) ASSERT_EQ(next.semantic.at(i), sem.at(i));
  }
}

TEST(Gate, MergedMagnitudeStaysInOpenBand) {
  Rng rng(13);
  fusion::GateBlock gate(8, rng);
  randomize(gate.fc2.weight, rng, 1.0);
  randomize(gate.fc2.bias, rng, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Tensor sem = random_tensor({3, 8}, rng, -3, 3);
    const Tensor spec = random_tensor({3, 8}, rng, -3, 3);
    const Tensor g = gate(sem, spec);
    const auto next = fusion::merge(1, g, sem, spec);
    for (std::size_t i = 0; i < spec.numel(); ++i) {
      ASSERT_GT(g.at(i), 0.0);
      ASSERT_LT(g.at(i), 1.0);
      if (spec.at(i) == 0.0) continue;
      const double ratio = next.spectral.at(i) / spec.at(i);
      ASSERT_GT(ratio, 1.0);
      ASSERT_LT(ratio, 2.0);
    }
  }
}

TEST(Gate, ShapeMismatchRaises) {
  Rng rng(14);
  fusion::GateBlock gate(8, rng);
  EXPECT_THROW(gate(random_tensor({3, 8}, rng), random_tensor({4, 8}, rng)), DimensionError);
  EXPECT_THROW(gate(random_tensor({3, 4}, rng), random_tensor({3, 4}, rng)), DimensionError);
}

TEST(DualStream, VariantNames) {
  EXPECT_EQ(fusion::parse_variant("sem"), AblationVariant::kSemanticOnly);
  EXPECT_EQ(fusion::parse_variant("spectral_only"), AblationVariant::kSpectralOnly);
  EXPECT_EQ(fusion::parse_variant("concat"), AblationVariant::kConcatNoGate);
  EXPECT_EQ(fusion::parse_variant("gated"), AblationVariant::kGated);
  for (auto v : fusion::all_variants()) EXPECT_EQ(fusion::parse_variant(fusion::to_string(v)), v);
  EXPECT_THROW(fusion::parse_variant("both"), UsageError);
}

TEST(DualStream, GatedForwardMatchesReference) {
  Rng rng(15);
  fusion::DualStreamEncoder enc(tiny(), AblationVariant::kGated, rng);
  for (std::size_t l = 1; l <= 2; ++l) {
    randomize(enc.gate_block(l).fc2.weight, rng, 0.5);
    randomize(enc.gate_block(l).fc2.bias, rng, 0.5);
  }
  const Tensor sem = random_tensor({3, 16, 16}, rng), spec = random_tensor({3, 16, 16}, rng);
  const Tensor h = enc.forward(sem, spec);
  const auto ref = testing::ref_gated_forward(enc, sem, spec);
  ASSERT_EQ(h.shape(), (numerics::Shape{1, 8}));
  for (std::size_t c = 0; c < 8; ++c) EXPECT_NEAR(h.at(c), ref[c], 1e-10);
}

TEST(DualStream, TraceRecordsEveryLayer) {
  Rng rng(16);
  fusion::DualStreamEncoder enc(tiny(), AblationVariant::kGated, rng);
  const Tensor sem = random_tensor({3, 16, 16}, rng), spec = random_tensor({3, 16, 16}, rng);
  fusion::FusionTrace trace;
  const auto st = enc.trace_semantic(sem);
  enc.forward(st, spec, &trace);
  ASSERT_EQ(trace.gates.size(), 2u);
  for (std::size_t l = 0; l < 2; ++l)
    for (std::size_t i = 0; i < trace.gates[l].numel(); ++i)
      EXPECT_EQ(trace.spectral_after[l].at(i), 1.5 * trace.spectral_before[l].at(i));
  const Tensor full = enc.semantic_encoder().forward(sem);
  for (std::size_t i = 0; i < full.numel(); ++i) EXPECT_EQ(st.layers.back().at(i), full.at(i));
}

TEST(DualStream, GuidanceFlowsOneWay) {
  Rng rng(17);
  fusion::DualStreamEncoder enc(tiny(), AblationVariant::kGated, rng);
  for (std::size_t l = 1; l <= 2; ++l) randomize(enc.gate_block(l).fc2.weight, rng, 0.5);
  const Tensor sem = random_tensor({3, 16, 16}, rng);
  const auto before = enc.trace_semantic(sem);
  enc.forward(before, random_tensor({3, 16, 16}, rng));
  const auto after = enc.trace_semantic(sem);
  for (std::size_t l = 0; l < 2; ++l)
    for (std::size_t i = 0; i < before.layers[l].numel(); ++i)
      ASSERT_EQ(before.layers[l].at(i), after.layers[l].at(i));

  // The semantic stream reaches the output only through the gates.
  Tensor sem_leaf = sem;
  sem_leaf.set_requires_grad(true);
  Tensor spec = random_tensor({3, 16, 16}, rng);
  numerics::Tape tape;
  {
    numerics::Tape::Scope scope(tape);
    tape.backward(numerics::sum(enc.forward(sem_leaf, spec)));
  }
  double norm = 0.0;
  for (double g : sem_leaf.grad()) norm += g * g;
  EXPECT_GT(norm, 0.0);
}

TEST(DualStream, AblationsIgnoreTheDroppedStream) {
  Rng rng(18);
  const Tensor a = random_tensor({3, 16, 16}, rng), b = random_tensor({3, 16, 16}, rng);
  fusion::DualStreamEncoder sem_only(tiny(), AblationVariant::kSemanticOnly, rng);
  fusion::DualStreamEncoder spec_only(tiny(), AblationVariant::kSpectralOnly, rng);
  const Tensor s1 = sem_only.forward(a, a), s2 = sem_only.forward(a, b);
  const Tensor p1 = spec_only.forward(a, b), p2 = spec_only.forward(b, b);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(s1.at(i), s2.at(i));
    EXPECT_EQ(p1.at(i), p2.at(i));
  }
  fusion::DualStreamEncoder concat(tiny(), AblationVariant::kConcatNoGate, rng);
  EXPECT_EQ(concat.forward(a, b).shape(), (numerics::Shape{1, 8}));
}

TEST(DualStream, ParameterLayoutIsVariantIndependent) {
  std::vector<std::size_t> counts;
  for (auto v : fusion::all_variants()) {
    Rng rng(19);
    fusion::DualStreamEncoder enc(tiny(), v, rng);
    counts.push_back(numerics::parameter_count(enc.parameters()));
    for (const auto& p : enc.trainable_parameters())
      EXPECT_EQ(p.name.find("semantic"), std::string::npos) << p.name;
  }
  EXPECT_EQ(std::count(counts.begin(), counts.end(), counts[0]), 4);
}

TEST(DualStream, GatedGradientsMatchFiniteDifferences) {
  Rng rng(20);
  auto cfg = tiny();
  cfg.depth = 1;
  fusion::DualStreamEncoder enc(cfg, AblationVariant::kGated, rng);
  randomize(enc.gate_block(1).fc2.weight, rng, 0.5);
  const Tensor sem = random_tensor({3, 16, 16}, rng), spec = random_tensor({3, 16, 16}, rng);
  const Tensor w = random_tensor({1, 8}, rng);
  std::vector<Tensor> leaves;
  std::vector<std::string> names;
  for (const auto& p : enc.parameters()) {
    leaves.push_back(p.tensor);
    names.push_back(p.name);
  }
  testing::GradcheckOptions opt;
  opt.samples_per_leaf = 6;
  opt.floor = 1e-5;
  opt.step = 1e-5;
  const auto res = testing::gradcheck(
      [&] { return numerics::sum(numerics::mul(enc.forward(sem, spec), w)); }, leaves, names, opt);
  EXPECT_LT(res.max_rel_error, 1e-4) << res.worst;
}

// ---- temporal head ----

TEST(TemporalHead, FrameSampling) {
  EXPECT_EQ(temporal::sample_frame_indices(16, 8), (std::vector<std::size_t>{0, 2, 4, 6, 8, 10, 12, 14}));
  EXPECT_EQ(temporal::sample_frame_indices(3, 4), (std::vector<std::size_t>{0, 0, 1, 2}));
  EXPECT_EQ(temporal::sample_frame_indices(5, 1), (std::vector<std::size_t>{0}));
  EXPECT_THROW(temporal::sample_frame_indices(0, 4), DataError);
}

temporal::HeadConfig head_cfg(temporal::HeadKind kind) {
  temporal::HeadConfig cfg;
  cfg.kind = kind;
  cfg.frames = 4;
  cfg.dim = 8;
  cfg.heads = 2;
  return cfg;
}

TEST(TemporalHead, MeanKindAveragesFrames) {
  Rng rng(21);
  temporal::TemporalHead head(head_cfg(temporal::HeadKind::kMeanPool), rng);
  const Tensor f = random_tensor({4, 8}, rng);
  const Tensor p = head.aggregate(f);
  for (std::size_t c = 0; c < 8; ++c)
    EXPECT_NEAR(p.at(c), (f.at(0, c) + f.at(1, c) + f.at(2, c) + f.at(3, c)) / 4.0, 1e-15);
  EXPECT_TRUE(head.parameters("h").size() == 2u);
}

TEST(TemporalHead, ZeroedBlocksReduceToMeanOfPositionedFrames) {
  Rng rng(22);
  temporal::TemporalHead head(head_cfg(temporal::HeadKind::kTransformer), rng);
  for (std::size_t i = 0; i < 2; ++i) {
    fill(head.layer(i).proj.weight, 0.0);
    fill(head.layer(i).fc2.weight, 0.0);
  }
  const Tensor f = random_tensor({4, 8}, rng);
  const Tensor p = head.aggregate(f);
  for (std::size_t c = 0; c < 8; ++c) {
    double s = 0.0;
    for (std::size_t t = 0; t < 4; ++t) s += f.at(t, c) + head.positions().at(t, c);
    EXPECT_NEAR(p.at(c), s / 4.0, 1e-15);
  }
}

TEST(TemporalHead, LogitIsAffineReadout) {
  Rng rng(23);
  temporal::TemporalHead head(head_cfg(temporal::HeadKind::kTransformer), rng);
  const Tensor pooled = random_tensor({1, 8}, rng);
  EXPECT_EQ(head.logit(pooled).item(), 0.0);
  EXPECT_EQ(head.classify(pooled), 0.5);
  randomize(head.classifier().weight, rng, 1.0);
  fill(head.classifier().bias, 0.25);
  double z = 0.25;
  for (std::size_t c = 0; c < 8; ++c) z += pooled.at(c) * head.classifier().weight.at(c);
  EXPECT_NEAR(head.logit(pooled).item(), z, 1e-14);
  EXPECT_NEAR(head.classify(pooled), 1.0 / (1.0 + std::exp(-z)), 1e-15);
}

TEST(TemporalHead, ShapeAndConfigChecks) {
  Rng rng(24);
  temporal::TemporalHead head(head_cfg(temporal::HeadKind::kTransformer), rng);
  EXPECT_THROW(head.aggregate(random_tensor({3, 8}, rng)), DimensionError);
  auto bad = head_cfg(temporal::HeadKind::kTransformer);
  bad.heads = 3;
  EXPECT_THROW(bad.validate(), ContractError);
  EXPECT_EQ(temporal::parse_head_kind("mean"), temporal::HeadKind::kMeanPool);
  EXPECT_EQ(temporal::parse_head_kind("transformer"), temporal::HeadKind::kTransformer);
}

}  // namespace
}  // namespace specsem
