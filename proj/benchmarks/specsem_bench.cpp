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

#include <benchmark/benchmark.h>

#include "specsem/datagen/clip.hpp"
#include "specsem/numerics/tape.hpp"
#include "specsem/spectral/fft.hpp"
#include "specsem/spectral/residual.hpp"
#include "specsem/training/detector.hpp"

namespace specsem {
namespace {

void BM_Fft2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  std::vector<double> grid(n * n);
  for (auto& v : grid) v = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(spectral::fft2(grid, n, n));
}
BENCHMARK(BM_Fft2)->RangeMultiplier(2)->Range(16, 256);

void BM_ExtractResidual(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto clip = datagen::gen_real_clip(3, 1, n);
  const double radius = spectral::radius_for_size(spectral::kDefaultRadius, n);
  for (auto _ : state) benchmark::DoNotOptimize(spectral::extract_residual(clip.frames[0], radius));
}
BENCHMARK(BM_ExtractResidual)->Arg(64)->Arg(224);

void BM_FrameForward(benchmark::State& state) {
  auto cfg = training::DetectorConfig::desk();
  cfg.variant = static_cast<fusion::AblationVariant>(state.range(0));
  const training::Detector det(cfg);
  const auto clip = datagen::gen_real_clip(4, 1, cfg.encoder.input_size);
  const auto in = det.prepare_frame(clip.frames[0]);
  numerics::NoGradGuard guard;
  for (auto _ : state) {
    const auto trace = det.encoder().uses_semantic() ? det.encoder().trace_semantic(in.semantic)
                                                     : fusion::SemanticTrace{};
    benchmark::DoNotOptimize(det.encoder().forward(trace, in.spectral));
  }
  state.SetLabel(fusion::to_string(cfg.variant));
}
BENCHMARK(BM_FrameForward)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_ClipScore(benchmark::State& state) {
  auto cfg = training::DetectorConfig::desk();
  cfg.head.frames = 4;
  const training::Detector det(cfg);
  const auto clip = datagen::gen_fake_clip(5, 4, cfg.encoder.input_size, datagen::ArtifactKind::kGrid);
  for (auto _ : state) benchmark::DoNotOptimize(det.score(clip));
}
BENCHMARK(BM_ClipScore)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace specsem

BENCHMARK_MAIN();
