// Copyright 2026 The melsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "melsep/anc.hpp"
#include "melsep/audio.hpp"
#include "melsep/cluster.hpp"
#include "melsep/fft.hpp"
#include "melsep/mfcc.hpp"

using namespace melsep;

namespace {

void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<std::complex<double>> src(n);
  for (auto& v : src) v = g(rng);
  for (auto _ : state) {
    auto data = src;
    fft_inplace(data);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Fft)->RangeMultiplier(2)->Range(64, 4096);

void BM_ExtractSingle(benchmark::State& state) {
  const AudioBuffer audio = synth_speaker(3, 2, 1.0, 5);
  const ExtractionConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(extract_single_channel(audio, cfg, "b"));
}
BENCHMARK(BM_ExtractSingle)->Unit(benchmark::kMillisecond);

// Includes the two 101-tap zero-phase channel filters.
void BM_ExtractDual(benchmark::State& state) {
  const AudioBuffer audio = synth_speaker(3, 2, 1.0, 5);
  const ExtractionConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(extract_dual_channel(audio, cfg, "b"));
}
BENCHMARK(BM_ExtractDual)->Unit(benchmark::kMillisecond);

void BM_LmsStep(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  LmsState s = LmsState::from_config({order, 1e-4, {}});
  const auto x = white_noise(4096, 2);
  std::size_t k = 0;
  for (auto _ : state) {
    const auto r = lms_step(s, x[k], x[(k + 7) % x.size()], 1e-4);
    benchmark::DoNotOptimize(r);
    k = (k + 1) % x.size();
  }
}
BENCHMARK(BM_LmsStep)->Arg(7)->Arg(31)->Arg(127);

void BM_AncOneSecond(benchmark::State& state) {
  const AudioBuffer clean = sine(500.0, 0.5, 16000, 16000, 0.0);
  NoiseSpec spec;
  spec.seed = 3;
  const MixResult m = mix_at_snr(clean, spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_anc(m.noisy, m.noise_only, LmsConfig{31, 0.005, {}}));
  }
}
BENCHMARK(BM_AncOneSecond)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  Matrix pts(n, 12);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < 12; ++j) pts(i, j) = g(rng) + (i % 2 ? 3.0 : 0.0);
  }
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(kmeans(pts, {2, 100, 1e-9}, seed++));
}
BENCHMARK(BM_KMeans)->Arg(98)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
