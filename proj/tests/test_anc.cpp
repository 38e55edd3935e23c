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

#include <cmath>
#include <random>

#include "doctest.h"
#include "melsep/anc.hpp"
#include "melsep/config.hpp"
#include "melsep/error.hpp"
#include "oracles.hpp"

using namespace melsep;

namespace {

LmsState state_with(std::vector<double> w, std::vector<double> x) {
  LmsState s;
  s.weights = std::move(w);
  s.delay_line = std::move(x);
  return s;
}

// Clean 500 Hz sine plus 0 dB white noise; the noise itself is the reference.
struct Fixture {
  AudioBuffer clean, primary, reference;
};

Fixture sine_fixture(double seconds, std::uint64_t seed) {
  Fixture f;
  const auto n = static_cast<std::size_t>(seconds * 16000);
  f.clean = sine(500.0, 0.5, n, 16000, 0.0);
  NoiseSpec spec;
  spec.target_snr_db = 0.0;
  spec.seed = seed;
  const MixResult m = mix_at_snr(f.clean, spec);
  f.primary = m.noisy;
  f.reference = m.noise_only;
  return f;
}

}  // namespace

TEST_SUITE("anc") {

TEST_CASE("combiner output is the weight/delay dot product") {
  CHECK(combiner_output(state_with({0, 0, 0}, {0.4, -2, 9})) == 0.0);
  CHECK(combiner_output(state_with({1, 0}, {0.3, 0.9})) == 0.3);
  CHECK(combiner_output(state_with({0.5, 0.25}, {1.0, 1.0})) == 0.75);
}

TEST_CASE("single tap hand iteration 0 -> 0.5 -> 0.75") {
  LmsState s = state_with({0.0}, {0.0});
  auto r1 = lms_step(s, 1.0, 1.0, 0.25);
  CHECK(r1.output == 0.0);
  CHECK(r1.error == 1.0);
  CHECK(s.weights[0] == 0.5);
  auto r2 = lms_step(s, 1.0, 1.0, 0.25);
  CHECK(r2.output == 0.5);
  CHECK(r2.error == 0.5);
  CHECK(s.weights[0] == 0.75);
  CHECK(s.k == 2);
}

TEST_CASE("delay line shifts with the newest sample at index 0") {
  LmsState s = LmsState::from_config({3, 0.01, {}});
  for (double x : {1.0, 2.0, 3.0}) lms_step(s, 0.0, x, 0.01);
  CHECK(s.delay_line == std::vector<double>{3.0, 2.0, 1.0, 0.0});
}

TEST_CASE("zero error or zero input leaves weights unchanged") {
  LmsState s = state_with({0.5, -0.25}, {0.0, 0.0});
  lms_step(s, 0.5, 1.0, 0.1);  // y = 0.5 * 1, e = 0
  CHECK(s.weights == std::vector<double>{0.5, -0.25});

  LmsState z = state_with({0.3, 0.1}, {0.0, 0.0});
  lms_step(z, 7.0, 0.0, 0.1);
  CHECK(z.weights == std::vector<double>{0.3, 0.1});
}

TEST_CASE("weight update identity holds on random sequences") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  LmsState s = LmsState::from_config({7, 0.01, {}});
  for (int k = 0; k < 2000; ++k) {
    const auto before = s.weights;
    const double d = g(rng), x = g(rng);
    const auto r = lms_step(s, d, x, 0.01);
    for (std::size_t l = 0; l < before.size(); ++l) {
      REQUIRE(s.weights[l] - before[l] == doctest::Approx(2.0 * 0.01 * r.error * s.delay_line[l]).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero reference passes the primary through exactly") {
  const AudioBuffer primary = sine(700.0, 0.3, 3000, 16000, 0.1);
  AudioBuffer zero;
  zero.samples.assign(primary.size(), 0.0);
  const AncResult r = run_anc(primary, zero, LmsConfig{});
  CHECK(r.error_signal == primary);
}

TEST_CASE("ANC on the sine fixture gains at least 10 dB over the last second") {
  const Fixture f = sine_fixture(5.0, 99);
  const AncResult r = run_anc(f.primary, f.reference, LmsConfig{31, 0.005, {}});
  const std::size_t tail = f.clean.size() - 16000;
  const double before = oracle::snr_db(f.clean.samples, f.primary.samples, tail);
  const double after = oracle::snr_db(f.clean.samples, r.error_signal.samples, tail);
  CHECK(after >= before + 10.0);
}

TEST_CASE("mse trace of the sine fixture falls") {
  // The error signal still contains the clean sine (power 0.125), so the
  // trace cannot fall below that floor; compare the residual instead.
  const Fixture f = sine_fixture(5.0, 99);
  const AncResult r = run_anc(f.primary, f.reference, LmsConfig{31, 0.005, {}});
  const auto& t = r.mse_trace;
  REQUIRE(t.size() >= 8);
  const double first = (t[0] + t[1] + t[2] + t[3]) / 4;
  const double last = (t[t.size() - 1] + t[t.size() - 2] + t[t.size() - 3] + t[t.size() - 4]) / 4;
  CHECK(last < first);

  std::vector<double> residual(f.clean.size());
  for (std::size_t i = 0; i < residual.size(); ++i) {
    residual[i] = r.error_signal.samples[i] - f.clean.samples[i];
  }
  const auto rt = mse_trace(residual, kMseWindow);
  const double rf = (rt[0] + rt[1] + rt[2] + rt[3]) / 4;
  const double rl = (rt[rt.size() - 1] + rt[rt.size() - 2] + rt[rt.size() - 3] + rt[rt.size() - 4]) / 4;
  CHECK(rl <= 0.25 * rf);
}

TEST_CASE("single tap converges to the path gain") {
  for (double gain : {-2.0, -0.7, 0.5, 1.0, 1.8}) {
    const auto x = white_noise(5 * 16000, 1234);
    AudioBuffer ref, primary;
    ref.samples = x;
    primary.samples = x;
    for (double& v : primary.samples) v *= gain;
    const AncResult r = run_anc(primary, ref, LmsConfig{0, 0.001, {}});
    CHECK(r.final_weights[0] == doctest::Approx(gain).epsilon(0.05));
  }
}

TEST_CASE("huge step diverges with the step index") {
  const Fixture f = sine_fixture(0.5, 3);
  try {
    (void)run_anc(f.primary, f.reference, LmsConfig{31, 1e3, {}});
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.step() > 0);
    CHECK(e.step() < f.primary.size());
  }
}

TEST_CASE("run_anc rejects mismatched inputs and bad configs") {
  const AudioBuffer a = sine(100, 0.1, 100, 16000, 0);
  const AudioBuffer b = sine(100, 0.1, 99, 16000, 0);
  CHECK_THROWS_AS(run_anc(a, b, LmsConfig{}), DimensionError);
  CHECK_THROWS_AS(run_anc(a, a, LmsConfig{-1, 0.1, {}}), ParameterError);
  CHECK_THROWS_AS(run_anc(a, a, LmsConfig{3, 0.0, {}}), ParameterError);
  CHECK_THROWS_AS(run_anc(a, a, LmsConfig{3, 0.1, {1.0}}), ParameterError);
}

TEST_CASE("run_anc is deterministic") {
  const Fixture f = sine_fixture(0.5, 8);
  CHECK(run_anc(f.primary, f.reference, LmsConfig{}) ==
        run_anc(f.primary, f.reference, LmsConfig{}));
}

TEST_CASE("mse_trace windows") {
  CHECK(mse_trace(std::vector<double>{1, -1, 1, -1}, 2) == std::vector<double>{1.0, 1.0});
  CHECK(mse_trace(std::vector<double>{0, 0, 0}, 2) == std::vector<double>{0.0, 0.0});
  CHECK(mse_trace(std::vector<double>{3, 1}, 1) == std::vector<double>{9.0, 1.0});
  CHECK(mse_trace(std::vector<double>{2, 2, 4}, 2) == std::vector<double>{4.0, 16.0});
  CHECK(mse_trace(std::vector<double>{}, 4).empty());
  CHECK_THROWS_AS(mse_trace(std::vector<double>{1}, 0), ParameterError);
}

TEST_CASE("normalized step divides by primary power") {
  AudioBuffer primary;
  primary.samples = {2.0, -2.0};
  AncOptions opt;
  opt.lms.step = 0.004;
  CHECK(effective_step(opt, primary) == doctest::Approx(0.001));
  opt.normalize_step = false;
  CHECK(effective_step(opt, primary) == 0.004);
}

TEST_CASE("normalized ANC leaves a near-clean input nearly untouched") {
  const AudioBuffer clean = synth_speaker(3, 1, 1.0, 5);
  NoiseSpec spec;
  spec.target_snr_db = 60.0;
  spec.seed = 2;
  const MixResult m = mix_at_snr(clean, spec);
  const AncResult r = run_anc(m.noisy, m.noise_only, AncOptions{});
  CHECK(measure_snr_db(clean, r.error_signal) >= 50.0);
}

}  // TEST_SUITE
