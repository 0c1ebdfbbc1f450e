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
#include <numeric>

#include <nlohmann/json.hpp>

#include "metric_oracles.hpp"
#include "oracles.hpp"
#include "specsem/datagen/dataset.hpp"
#include "specsem/errors.hpp"
#include "specsem/metrics/evaluate.hpp"
#include "specsem/metrics/metrics.hpp"
#include "specsem/metrics/perturb.hpp"
#include "specsem/rng.hpp"
#include "specsem/spectral/fft.hpp"

namespace specsem {
namespace {

using metrics::ScoredSet;
using testing::oracle_accuracy;
using testing::oracle_ap;
using testing::oracle_f1;
using testing::random_set;

const ScoredSet kWorked{{0.9, 0.8, 0.7, 0.1}, {1, 0, 1, 0}};

TEST(Metrics, WorkedExample) {
  EXPECT_EQ(metrics::accuracy(kWorked), 0.75);
  EXPECT_EQ(metrics::f1(kWorked), 0.8);
  EXPECT_NEAR(metrics::average_precision(kWorked), 5.0 / 6.0, 1e-15);
}

TEST(Metrics, DegenerateConventions) {
  const ScoredSet perfect{{0.9, 0.2, 0.6, 0.4}, {1, 0, 1, 0}};
  EXPECT_EQ(metrics::accuracy(perfect), 1.0);
  EXPECT_EQ(metrics::f1(perfect), 1.0);
  EXPECT_EQ(metrics::average_precision(perfect), 1.0);
  const ScoredSet none_predicted{{0.1, 0.2, 0.3}, {1, 0, 1}};
  EXPECT_EQ(metrics::f1(none_predicted), 0.0);
  EXPECT_EQ(metrics::accuracy(kWorked, 0.0), 0.5);
  const ScoredSet one_class{{0.1, 0.9}, {1, 1}};
  EXPECT_THROW(metrics::average_precision(one_class), ContractError);
  EXPECT_THROW(metrics::accuracy(ScoredSet{}), ContractError);
  EXPECT_THROW(metrics::accuracy(ScoredSet{{0.1}, {2}}), ContractError);
  EXPECT_THROW(metrics::accuracy(ScoredSet{{0.1, 0.2}, {1}}), ContractError);
}

TEST(Metrics, BruteForceOracles) {
  Rng rng(2024);
  int ap_checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const ScoredSet s = random_set(rng);
    for (double t : {0.5, 0.0, 0.25, 1.0}) {
      ASSERT_EQ(metrics::accuracy(s, t), oracle_accuracy(s, t).value());
      ASSERT_EQ(metrics::f1(s, t), oracle_f1(s, t).value());
    }
    const auto pos = s.positives();
    if (pos == 0 || pos == s.size()) continue;
    ASSERT_NEAR(metrics::average_precision(s), oracle_ap(s), 1e-12);
    ++ap_checked;
  }
  EXPECT_GT(ap_checked, 900);
}

TEST(Metrics, RangesAndCurveShape) {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const ScoredSet s = random_set(rng);
    for (double v : {metrics::accuracy(s), metrics::f1(s)}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    const auto c = metrics::pr_curve(s);
    for (std::size_t i = 0; i < c.recall.size(); ++i) {
      EXPECT_GE(c.precision[i], 0.0);
      EXPECT_LE(c.precision[i], 1.0);
      if (i > 0) EXPECT_GE(c.recall[i], c.recall[i - 1]);
    }
  }
}

TEST(Metrics, ApInvariantUnderIncreasingTransforms) {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    ScoredSet s = random_set(rng);
    const auto pos = s.positives();
    if (pos == 0 || pos == s.size()) continue;
    const double base = metrics::average_precision(s);
    ScoredSet t = s;
    for (double& v : t.scores) v = std::exp(3.0 * v) / (1.0 + std::exp(3.0 * v));
    EXPECT_EQ(metrics::average_precision(t), base);
    for (double& v : t.scores) v = std::pow(v, 5.0);
    EXPECT_EQ(metrics::average_precision(t), base);
  }
}

// ---- perturbations ----

Image noise_frame(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Image img(3, n, n);
  for (auto& v : img.data) v = rng.uniform();
  return img;
}

double high_band_energy(const Image& img, double radius) {
  double e = 0.0;
  const std::size_t n = img.height;
  for (std::size_t c = 0; c < img.channels; ++c) {
    const auto ch = img.channel(c);
    const auto spec = spectral::fft2(ch, n, n);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (std::hypot(static_cast<double>(testing::signed_freq(u, n)),
                       static_cast<double>(testing::signed_freq(v, n))) > radius)
          e += std::norm(spec.at(u, v));
  }
  return e;
}

TEST(Blur, ZeroSigmaIsBitwiseIdentity) {
  const Image f = noise_frame(16, 1);
  EXPECT_EQ(metrics::perturb_blur(f, 0.0).data, f.data);
  EXPECT_THROW(metrics::perturb_blur(f, -0.5), DomainError);
}

TEST(Blur, ConstantImageIsFixedPoint) {
  const Image f(3, 12, 10, 0.37);
  for (double sigma : {0.5, 1.0, 2.5})
    for (double v : metrics::perturb_blur(f, sigma).data) EXPECT_NEAR(v, 0.37, 1e-15);
}

TEST(Blur, ReducesHighBandEnergyMonotonically) {
  const Image f = noise_frame(64, 2);
  const double e0 = high_band_energy(f, 16.0);
  const double e1 = high_band_energy(metrics::perturb_blur(f, 0.5), 16.0);
  const double e2 = high_band_energy(metrics::perturb_blur(f, 1.0), 16.0);
  EXPECT_LT(e1, e0);
  EXPECT_LT(e2, e1);
  EXPECT_LT(high_band_energy(metrics::perturb_blur(f, 1.0), 32.0), high_band_energy(f, 32.0));
}

TEST(Blur, MatchesDirectConvolution) {
  const Image f = noise_frame(9, 3);
  const double sigma = 0.8;
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k;
  double z = 0.0;
  for (int i = -r; i <= r; ++i) z += k.emplace_back(std::exp(-0.5 * i * i / (sigma * sigma)));
  auto reflect = [](int i, int n) { return i < 0 ? -i : (i >= n ? 2 * n - 2 - i : i); };
  const Image got = metrics::perturb_blur(f, sigma);
  for (std::size_t c = 0; c < 3; ++c)
    for (int y = 0; y < 9; ++y)
      for (int x = 0; x < 9; ++x) {
        double acc = 0.0;
        for (int dy = -r; dy <= r; ++dy)
          for (int dx = -r; dx <= r; ++dx)
            acc += k[dy + r] * k[dx + r] / (z * z) *
                   f.at(c, reflect(y + dy, 9), reflect(x + dx, 9));
        EXPECT_NEAR(got.at(c, y, x), acc, 1e-12);
      }
}

TEST(Compress, DctRoundTripIsExact) {
  Rng rng(4);
  metrics::Block8 b;
  for (auto& v : b) v = rng.uniform(-128, 128);
  const auto back = metrics::idct8(metrics::dct8(b));
  for (std::size_t i = 0; i < 64; ++i) EXPECT_NEAR(back[i], b[i], 1e-9);
  double e_in = 0.0, e_out = 0.0;
  for (std::size_t i = 0; i < 64; ++i) e_in += b[i] * b[i];
  for (double v : metrics::dct8(b)) e_out += v * v;
  EXPECT_NEAR(e_out, e_in, 1e-9 * e_in);
}

TEST(Compress, DctMatchesDefinition) {
  Rng rng(5);
  metrics::Block8 b;
  for (auto& v : b) v = rng.uniform(-1, 1);
  const auto got = metrics::dct8(b);
  auto alpha = [](int k) { return k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0); };
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) {
      double acc = 0.0;
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
          acc += b[y * 8 + x] * std::cos((2 * y + 1) * u * std::numbers::pi / 16) *
                 std::cos((2 * x + 1) * v * std::numbers::pi / 16);
      EXPECT_NEAR(got[u * 8 + v], alpha(u) * alpha(v) * acc, 1e-12);
    }
}

TEST(Compress, QualityTable) {
  const auto q100 = metrics::quantization_table(100);
  for (double v : q100) EXPECT_EQ(v, 1.0);
  const auto q50 = metrics::quantization_table(50);
  EXPECT_EQ(q50[0], 16.0);
  EXPECT_EQ(q50[63], 99.0);
  const auto q1 = metrics::quantization_table(1);
  for (double v : q1) {
    EXPECT_GE(v, 1.0);
    EXPECT_LE(v, 255.0);
  }
  EXPECT_THROW(metrics::quantization_table(0), DomainError);
  EXPECT_THROW(metrics::quantization_table(101), DomainError);
}

TEST(Compress, NearLosslessAtFullQuality) {
  Image f = noise_frame(16, 6);
  quantize_8bit(f);
  const Image g = metrics::perturb_compress(f, 100);
  for (std::size_t i = 0; i < f.data.size(); ++i) EXPECT_LE(std::abs(g.data[i] - f.data[i]), 1.0 / 255.0 + 1e-12);
}

TEST(Compress, LowQualityRemovesHighBand) {
  const Image f = noise_frame(64, 7);
  EXPECT_LT(high_band_energy(metrics::perturb_compress(f, 10), 16.0), high_band_energy(f, 16.0));
}

TEST(Compress, OddExtentsAndPurity) {
  const Image f = noise_frame(13, 8);
  const Image a = metrics::perturb_compress(f, 40), b = metrics::perturb_compress(f, 40);
  EXPECT_TRUE(a.same_extents(f));
  EXPECT_EQ(a.data, b.data);
  for (double v : a.data) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Perturbation, Parsing) {
  EXPECT_EQ(metrics::parse_perturbation("none").kind, metrics::Perturbation::Kind::kNone);
  const auto b = metrics::parse_perturbation("blur:0.5");
  EXPECT_EQ(b.kind, metrics::Perturbation::Kind::kBlur);
  EXPECT_EQ(b.value, 0.5);
  EXPECT_EQ(metrics::parse_perturbation("compress:30").value, 30.0);
  for (const char* bad : {"blur", "blur:x", "blur:-1", "compress:0", "sharpen:1"})
    EXPECT_THROW(metrics::parse_perturbation(bad), UsageError) << bad;
}

// ---- reports ----

TEST(Report, MacroMeanOverSubsets) {
  std::vector<metrics::ClipScore> scores = {
      {"a", "standard", 1, 0.9}, {"b", "standard", 0, 0.2}, {"c", "standard", 1, 0.4},
      {"d", "noise_confound", 0, 0.7}, {"e", "noise_confound", 1, 0.8},
      {"f", "only_real", 0, 0.1}};
  const auto r = metrics::build_report(scores);
  ASSERT_EQ(r.subsets.size(), 3u);
  double acc = 0.0, f1 = 0.0, ap = 0.0;
  int ap_n = 0;
  for (const auto& s : r.subsets) {
    acc += s.acc;
    f1 += s.f1;
    if (s.ap) {
      ap += *s.ap;
      ++ap_n;
    }
  }
  EXPECT_NEAR(r.mean.acc, acc / 3.0, 1e-12);
  EXPECT_NEAR(r.mean.f1, f1 / 3.0, 1e-12);
  ASSERT_TRUE(r.mean.ap.has_value());
  EXPECT_NEAR(*r.mean.ap, ap / ap_n, 1e-12);
  EXPECT_EQ(ap_n, 2);

  const auto j = nlohmann::json::parse(r.json());
  EXPECT_TRUE(j.contains("subsets"));
  EXPECT_TRUE(j.contains("mean"));
  EXPECT_EQ(j["scores"].size(), 6u);
  EXPECT_NE(r.table().find("noise_confound"), std::string::npos);
}

class EvaluateTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("evaluate");
    datagen::DatasetSpec spec;
    spec.train_per_class = 2;
    spec.test_per_class = 3;
    spec.frames = 2;
    spec.size = 32;
    manifest_ = datagen::gen_dataset(spec, dir_->path());
  }
  static void TearDownTestSuite() { delete dir_; }
  static testing::TempDir* dir_;
  static datagen::DatasetManifest manifest_;
};
testing::TempDir* EvaluateTest::dir_ = nullptr;
datagen::DatasetManifest EvaluateTest::manifest_;

TEST_F(EvaluateTest, ConstantScorerPredictsEverythingFake) {
  const auto r = metrics::evaluate([](const datagen::Clip&) { return 0.5; }, manifest_,
                                   dir_->path(), datagen::Split::kTest);
  ASSERT_EQ(r.subsets.size(), 1u);
  EXPECT_EQ(r.subsets[0].count, 6u);
  // score 0.5 >= threshold 0.5, so every clip is called fake.
  EXPECT_EQ(r.subsets[0].acc, 0.5);
  EXPECT_EQ(r.subsets[0].f1, 2.0 / 3.0);
  ScoredSet set;
  for (const auto& s : r.scores) {
    set.scores.push_back(s.score);
    set.labels.push_back(s.label);
  }
  EXPECT_NEAR(*r.subsets[0].ap, oracle_ap(set), 1e-12);
}

TEST_F(EvaluateTest, IdentityPerturbationLeavesScoresBitwise) {
  auto scorer = [](const datagen::Clip& c) {
    double s = 0.0;
    for (const auto& f : c.frames)
      for (double v : f.data) s += v * v;
    return std::fmod(s, 1.0);
  };
  const auto plain = metrics::evaluate(scorer, manifest_, dir_->path(), datagen::Split::kTest);
  const auto blurred = metrics::evaluate(scorer, manifest_, dir_->path(), datagen::Split::kTest,
                                         metrics::parse_perturbation("blur:0"));
  ASSERT_EQ(plain.scores.size(), blurred.scores.size());
  for (std::size_t i = 0; i < plain.scores.size(); ++i) {
    EXPECT_EQ(plain.scores[i].id, blurred.scores[i].id);
    EXPECT_EQ(plain.scores[i].score, blurred.scores[i].score);
  }
}

TEST_F(EvaluateTest, MissingClipRaises) {
  auto broken = manifest_;
  broken.clips.front().path = "test/nowhere";
  broken.clips.front().split = datagen::Split::kTest;
  EXPECT_ANY_THROW(metrics::evaluate([](const datagen::Clip&) { return 0.5; }, broken,
                                     dir_->path(), datagen::Split::kTest));
}

}  // namespace
}  // namespace specsem
