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
#include <complex>
#include <random>

#include "doctest.h"
#include "melsep/error.hpp"
#include "melsep/fft.hpp"
#include "melsep/fir.hpp"
#include "melsep/mfcc.hpp"
#include "oracles.hpp"

using namespace melsep;

namespace {

AudioBuffer ramp(std::size_t n) {
  AudioBuffer b;
  for (std::size_t i = 0; i < n; ++i) b.samples.push_back(static_cast<double>(i));
  return b;
}

std::vector<double> random_frame(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return x;
}

std::vector<double> mean_row(const FeatureMatrix& f) {
  std::vector<double> m(f.num_coeffs, 0.0);
  for (std::size_t r = 0; r < f.rows.rows(); ++r)
    for (std::size_t c = 0; c < f.num_coeffs; ++c) m[c] += f.rows(r, c);
  for (double& v : m) v /= static_cast<double>(f.rows.rows());
  return m;
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

// Sum over frames and filters of the unlogged filterbank energies.
double mel_energy(const AudioBuffer& b, const MelFilterbank& bank, const ExtractionConfig& cfg) {
  const FrameMatrix fm = frame_blocking(b, cfg.frame_len, cfg.frame_shift);
  double total = 0.0;
  for (std::size_t r = 0; r < fm.frames.rows(); ++r) {
    const auto spec = fft_magnitude_sq(hamming_window(fm.frames.row(r)), cfg.fft_size);
    for (double a : log_mel_energies(spec, bank)) total += std::exp(a);
  }
  return total;
}

AudioBuffer tone_with_floor(double f, std::uint64_t seed) {
  AudioBuffer b = sine(f, 0.5, 16000, 16000, 0.0);
  const auto w = white_noise(b.size(), seed);
  // -40 dB relative to the tone power (0.125).
  const double g = std::sqrt(0.125 * 1e-4);
  for (std::size_t i = 0; i < b.size(); ++i) b.samples[i] += g * w[i];
  return b;
}

}  // namespace

TEST_SUITE("mfcc") {

TEST_CASE("frame blocking enumerates overlapped frames") {
  const FrameMatrix fm = frame_blocking(ramp(100), 40, 20);
  REQUIRE(fm.frames.rows() == 4);
  for (std::size_t l = 0; l < 4; ++l) {
    CHECK(fm.frames(l, 0) == static_cast<double>(l * 20));
    CHECK(fm.frames(l, 39) == static_cast<double>(l * 20 + 39));
  }
  CHECK(frame_count(100, 40, 20) == 4);

  const FrameMatrix one = frame_blocking(ramp(40), 40, 7);
  REQUIRE(one.frames.rows() == 1);
  CHECK(one.frames(0, 39) == 39.0);

  const FrameMatrix tiled = frame_blocking(ramp(100), 25, 25);
  CHECK(tiled.frames.rows() == 4);
  CHECK(tiled.frames(3, 0) == 75.0);

  CHECK(frame_count(16000, 400, 160) == 98);
}

TEST_CASE("frame blocking errors") {
  CHECK_THROWS_AS(frame_blocking(ramp(10), 40, 20), DimensionError);
  CHECK_THROWS_AS(frame_blocking(ramp(100), 40, 0), ParameterError);
  CHECK_THROWS_AS(frame_blocking(ramp(100), 40, 41), ParameterError);
}

TEST_CASE("hamming window values") {
  const auto w3 = hamming_window(std::vector<double>{1.0, 1.0, 1.0});
  CHECK(w3[0] == doctest::Approx(0.08));
  CHECK(w3[1] == doctest::Approx(1.0));
  CHECK(w3[2] == doctest::Approx(0.08));
  const auto w = hamming_window(std::vector<double>(401, 1.0));
  CHECK(w.front() == doctest::Approx(0.08));
  CHECK(w.back() == doctest::Approx(0.08));
  CHECK(w[200] == doctest::Approx(1.0));
  CHECK_THROWS_AS(hamming_window(std::vector<double>{1.0}), ParameterError);
}

TEST_CASE("fft power spectrum basics") {
  std::vector<double> impulse(8, 0.0);
  impulse[0] = 1.0;
  for (double v : fft_magnitude_sq(impulse, 8)) CHECK(v == doctest::Approx(1.0));
  const auto dc = fft_magnitude_sq(std::vector<double>{1, 1, 1, 1}, 4);
  REQUIRE(dc.size() == 3);
  CHECK(dc[0] == doctest::Approx(16.0));
  CHECK(dc[1] == doctest::Approx(0.0));
  CHECK(dc[2] == doctest::Approx(0.0));
  CHECK_THROWS_AS(fft_magnitude_sq(std::vector<double>{1, 2, 3}, 6), ParameterError);
  CHECK_THROWS_AS(fft_magnitude_sq(std::vector<double>(9, 1.0), 8), ParameterError);
}

TEST_CASE("fft matches the direct DFT and Parseval on random frames") {
  std::mt19937_64 rng(2024);
  for (std::size_t K : {2u, 4u, 16u, 64u, 128u}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto x = random_frame(rng, K - (trial % 2) * (K / 2));
      const auto got = fft_magnitude_sq(x, K);
      const auto ref = oracle::dft(x, K);
      REQUIRE(got.size() == K / 2 + 1);
      for (std::size_t k = 0; k <= K / 2; ++k) {
        CHECK(got[k] == doctest::Approx(std::norm(ref[k])).epsilon(1e-9));
      }
      // Parseval over the full spectrum; the one-sided bins are mirrored.
      double energy = 0.0, spec = 0.0;
      for (double v : x) energy += v * v;
      for (std::size_t k = 0; k < K; ++k) spec += std::norm(ref[k]);
      double one_sided = got[0] + got[K / 2];
      for (std::size_t k = 1; k < K / 2; ++k) one_sided += 2.0 * got[k];
      CHECK(energy == doctest::Approx(spec / static_cast<double>(K)).epsilon(1e-9));
      CHECK(energy == doctest::Approx(one_sided / static_cast<double>(K)).epsilon(1e-9));
    }
  }
}

TEST_CASE("mel scale values") {
  CHECK(hz_to_mel(0.0) == 0.0);
  CHECK(std::abs(hz_to_mel(700.0) - 781.17) <= 0.01);
  CHECK(std::abs(hz_to_mel(1000.0) - 999.99) <= 0.01);
  CHECK(mel_to_hz(0.0) == 0.0);
  CHECK(std::abs(mel_to_hz(hz_to_mel(1000.0)) - 1000.0) <= 1e-6);
  CHECK(std::abs(mel_to_hz(781.17) - 700.0) <= 0.01);
  CHECK_THROWS_AS(hz_to_mel(-1.0), ParameterError);
  CHECK_THROWS_AS(mel_to_hz(-1.0), ParameterError);
}

TEST_CASE("mel scale is monotone and invertible on [1, 8000] Hz") {
  double prev = -1.0;
  for (double f = 1.0; f <= 8000.0; f += 0.75) {
    const double m = hz_to_mel(f);
    CHECK(m > prev);
    prev = m;
    CHECK(mel_to_hz(m) == doctest::Approx(f).epsilon(1e-9));
  }
}

TEST_CASE("filterbank shape invariants") {
  struct Band { double lo, hi; std::size_t p; };
  for (const Band b : {Band{0, 4000, 26}, Band{0, 1000, 13}, Band{1000, 4000, 13}, Band{1000, 4000, 16}}) {
    const MelFilterbank bank = build_filterbank(b.lo, b.hi, b.p, 512, 16000);
    REQUIRE(bank.weights.rows() == b.p);
    REQUIRE(bank.weights.cols() == 257);
    REQUIRE(bank.boundary_bins.size() == b.p + 2);
    for (std::size_t m = 0; m < b.p; ++m) {
      const auto row = bank.weights.row(m);
      double peak = 0.0;
      std::size_t argmax = 0;
      for (std::size_t k = 0; k < row.size(); ++k) {
        REQUIRE(row[k] >= 0.0);
        if (row[k] > peak) {
          peak = row[k];
          argmax = k;
        }
      }
      CHECK(peak == 1.0);
      CHECK(argmax == bank.boundary_bins[m + 1]);
      // Unimodal: non-decreasing to the peak, non-increasing after.
      for (std::size_t k = 1; k <= argmax; ++k) REQUIRE(row[k] >= row[k - 1]);
      for (std::size_t k = argmax + 1; k < row.size(); ++k) REQUIRE(row[k] <= row[k - 1]);
      // Filter m's peak is filter m+1's left foot.
      if (m + 1 < b.p) {
        CHECK(bank.weights(m + 1, bank.boundary_bins[m + 1]) == 0.0);
      }
    }
    // Centres are equally spaced in mel.
    const double step = (hz_to_mel(b.hi) - hz_to_mel(b.lo)) / static_cast<double>(b.p + 1);
    for (std::size_t m = 0; m < b.p; ++m) {
      CHECK(hz_to_mel(bank.center_hz[m]) ==
            doctest::Approx(hz_to_mel(b.lo) + step * static_cast<double>(m + 1)).epsilon(1e-9));
    }
    // Partition of unity between the first and last peaks.
    for (std::size_t k = bank.boundary_bins.front() + 1; k < bank.boundary_bins.back(); ++k) {
      double sum = 0.0;
      for (std::size_t m = 0; m < b.p; ++m) sum += bank.weights(m, k);
      CHECK(sum > 0.0);
      CHECK(sum <= 1.0001);
      if (k >= bank.boundary_bins[1] && k <= bank.boundary_bins[b.p]) {
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("channel banks stay inside their bands") {
  const MelFilterbank ch1 = build_filterbank(0, 1000, 13, 512, 16000, ChannelId::kCh1);
  std::size_t highest = 0;
  for (std::size_t m = 0; m < ch1.num_filters; ++m)
    for (std::size_t k = 0; k < ch1.weights.cols(); ++k)
      if (ch1.weights(m, k) > 0.0) highest = std::max(highest, k);
  CHECK(static_cast<double>(highest) * 16000.0 / 512.0 <= 1000.0);

  const MelFilterbank ch2 = build_filterbank(1000, 4000, 16, 512, 16000, ChannelId::kCh2);
  for (std::size_t m = 2; m < ch2.num_filters; ++m) {
    CHECK(ch2.center_hz[m] - ch2.center_hz[m - 1] > ch2.center_hz[m - 1] - ch2.center_hz[m - 2]);
  }
}

TEST_CASE("single-filter bank peaks at the mel midpoint") {
  const MelFilterbank bank = build_filterbank(0, 4000, 1, 512, 16000);
  const double mid_hz = mel_to_hz(hz_to_mel(4000.0) / 2.0);
  CHECK(bank.center_hz[0] == doctest::Approx(mid_hz));
  CHECK(bank.boundary_bins[1] == static_cast<std::size_t>(std::lround(mid_hz * 512 / 16000)));
}

TEST_CASE("filterbank errors") {
  CHECK_THROWS_AS(build_filterbank(0, 9000, 26, 512, 16000), ParameterError);
  CHECK_THROWS_AS(build_filterbank(0, 4000, 0, 512, 16000), ParameterError);
  CHECK_THROWS_AS(build_filterbank(1000, 1100, 13, 512, 16000), ParameterError);
  CHECK_THROWS_AS(build_filterbank(0, 4000, 26, 500, 16000), ParameterError);
}

TEST_CASE("log mel energies") {
  const MelFilterbank bank = build_filterbank(0, 4000, 26, 512, 16000);
  const std::vector<double> zero(257, 0.0);
  for (double a : log_mel_energies(zero, bank)) CHECK(a == std::log(1e-12));

  const std::size_t m = 7;
  const auto row = bank.weights.row(m);
  const std::vector<double> spec(row.begin(), row.end());
  double expect = 0.0;
  for (double h : row) expect += h * h;
  CHECK(log_mel_energies(spec, bank)[m] == doctest::Approx(std::log(expect)));

  std::mt19937_64 rng(5);
  std::vector<double> p(257);
  for (double& v : p) v = std::abs(random_frame(rng, 1)[0]) + 0.1;
  std::vector<double> p2 = p;
  for (double& v : p2) v *= 2.0;
  const auto a = log_mel_energies(p, bank);
  const auto b = log_mel_energies(p2, bank);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] - a[i] == doctest::Approx(std::log(2.0)));

  CHECK_THROWS_AS(log_mel_energies(std::vector<double>(10, 1.0), bank), DimensionError);
}

TEST_CASE("dct against direct summation") {
  const double a = 1.7;
  const auto c = dct_cepstra(std::vector<double>(4, a), 4);
  for (std::size_t q = 1; q <= 4; ++q) {
    double expect = 0.0;
    for (int m = 1; m <= 4; ++m) expect += a * std::cos(m * (q - 0.5) * oracle::kPi / 4.0);
    CHECK(c[q - 1] == doctest::Approx(expect).epsilon(1e-12));
  }
  for (double v : dct_cepstra(std::vector<double>(13, 0.0), 12)) CHECK(v == 0.0);

  std::mt19937_64 rng(9);
  const auto x = random_frame(rng, 26);
  const auto y = random_frame(rng, 26);
  std::vector<double> xy(26);
  for (std::size_t i = 0; i < 26; ++i) xy[i] = x[i] + y[i];
  const auto cx = dct_cepstra(x, 12), cy = dct_cepstra(y, 12), cxy = dct_cepstra(xy, 12);
  for (std::size_t q = 0; q < 12; ++q) CHECK(std::abs(cxy[q] - cx[q] - cy[q]) <= 1e-12);

  CHECK_THROWS_AS(dct_cepstra(std::vector<double>(4, 1.0), 5), ParameterError);
  CHECK_THROWS_AS(dct_cepstra(std::vector<double>(4, 1.0), 0), ParameterError);
}

TEST_CASE("single-channel extraction") {
  ExtractionConfig cfg;
  AudioBuffer silence;
  silence.samples.assign(16000, 0.0);
  const FeatureMatrix s = extract_single_channel(silence, cfg, "quiet");
  CHECK(s.rows.rows() == 98);
  CHECK(s.num_coeffs == 12);
  CHECK(s.channel == ChannelId::kSingle);
  CHECK(s.source_id == "quiet");
  for (std::size_t r = 1; r < s.rows.rows(); ++r)
    for (std::size_t c = 0; c < 12; ++c) REQUIRE(s.rows(r, c) == s.rows(0, c));

  const AudioBuffer v = synth_speaker(1, 2, 0.37, 3);
  const FeatureMatrix f = extract_single_channel(v, cfg);
  CHECK(f.rows.rows() == frame_count(v.size(), 400, 160));
  for (double x : f.rows.data()) REQUIRE(std::isfinite(x));
  CHECK(f == extract_single_channel(v, cfg));
}

TEST_CASE("300 Hz and 2500 Hz tones are far apart in feature space") {
  ExtractionConfig cfg;
  const auto a1 = mean_row(extract_single_channel(tone_with_floor(300, 1), cfg));
  const auto a2 = mean_row(extract_single_channel(tone_with_floor(300, 2), cfg));
  const auto b1 = mean_row(extract_single_channel(tone_with_floor(2500, 1), cfg));
  CHECK(dist(a1, b1) > 10.0 * dist(a1, a2));
}

TEST_CASE("dual-channel extraction aligns and confines bands") {
  ExtractionConfig cfg;
  const AudioBuffer v = synth_speaker(4, 1, 1.0, 6);
  const DualFeatures d = extract_dual_channel(v, cfg, "x");
  CHECK(d.ch1.rows.rows() == d.ch2.rows.rows());
  CHECK(d.ch1.channel == ChannelId::kCh1);
  CHECK(d.ch2.channel == ChannelId::kCh2);

}

TEST_CASE("dual-channel mel energy stays in the tone's band") {
  // Cepstra are log-domain, so the faint out-of-band residue still has large
  // feature variance; confinement is checked on the mel energies instead.
  ExtractionConfig cfg;
  const auto bank1 = build_filterbank(0.0, 1000.0, 13, 512, 16000, ChannelId::kCh1);
  const auto bank2 = build_filterbank(1000.0, 4000.0, 13, 512, 16000, ChannelId::kCh2);
  for (double f : {300.0, 2500.0}) {
    const ChannelPair p = split_channels(sine(f, 0.5, 16000, 16000, 0.0), 1000.0, 4000.0);
    const double e1 = mel_energy(p.ch1, bank1, cfg);
    const double e2 = mel_energy(p.ch2, bank2, cfg);
    CAPTURE(f);
    if (f < 1000.0) {
      CHECK(e2 <= 0.05 * e1);
    } else {
      CHECK(e1 <= 0.05 * e2);
    }
  }
}

TEST_CASE("scaling the input leaves frame-to-frame feature differences unchanged") {
  ExtractionConfig cfg;
  const AudioBuffer v = synth_speaker(2, 0, 0.5, 1);
  AudioBuffer scaled = v;
  for (double& x : scaled.samples) x *= 0.3;
  const FeatureMatrix a = extract_single_channel(v, cfg);
  const FeatureMatrix b = extract_single_channel(scaled, cfg);
  for (std::size_t r = 1; r < a.rows.rows(); ++r)
    for (std::size_t c = 0; c < 12; ++c) {
      REQUIRE(std::abs((a.rows(r, c) - a.rows(0, c)) - (b.rows(r, c) - b.rows(0, c))) <= 1e-9);
    }
}

TEST_CASE("extraction config validation names the field") {
  ExtractionConfig cfg;
  cfg.validate(16000);
  cfg.fft_size = 256;  // shorter than the frame
  try {
    cfg.validate(16000);
    FAIL("expected ParameterError");
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("fft_size") != std::string::npos);
  }
  ExtractionConfig high;
  high.band_hi_hz = 9000.0;
  CHECK_THROWS_AS(high.validate(16000), ParameterError);
}

}  // TEST_SUITE
