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

#include "melsep/audio.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "melsep/error.hpp"

namespace melsep {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double frac(double x) { return x - std::floor(x); }

// Amplitude of the synthetic recording floor relative to the voice RMS.
constexpr double kRecordingFloor = 0.01;

}  // namespace

double mean_power(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

double rms(std::span<const double> x) { return std::sqrt(mean_power(x)); }

double measure_snr_db(const AudioBuffer& clean, const AudioBuffer& noisy) {
  if (clean.size() != noisy.size()) {
    throw DimensionError("measure_snr_db: length mismatch (" +
                         std::to_string(clean.size()) + " vs " +
                         std::to_string(noisy.size()) + ")");
  }
  if (clean.sample_rate_hz != noisy.sample_rate_hz) {
    throw DimensionError("measure_snr_db: sample rate mismatch");
  }
  const double signal_power = mean_power(clean.samples);
  if (signal_power == 0.0) {
    throw UndefinedSnrError("measure_snr_db: clean signal has zero power");
  }
  double noise_acc = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double d = noisy.samples[i] - clean.samples[i];
    noise_acc += d * d;
  }
  if (noise_acc == 0.0) return std::numeric_limits<double>::infinity();
  const double noise_power = noise_acc / static_cast<double>(clean.size());
  return 10.0 * std::log10(signal_power / noise_power);
}

std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> out(n);
  for (double& v : out) v = dist(rng);
  return out;
}

MixResult mix_at_snr(const AudioBuffer& clean, const NoiseSpec& spec) {
  if (clean.empty()) {
    throw UndefinedSnrError("mix_at_snr: empty clean buffer");
  }
  const double signal_power = mean_power(clean.samples);
  if (signal_power == 0.0) {
    throw UndefinedSnrError("mix_at_snr: clean signal has zero power");
  }

  std::vector<double> raw;
  switch (spec.kind) {
    case NoiseKind::kWhiteGaussian:
      raw = white_noise(clean.size(), spec.seed);
      break;
    case NoiseKind::kRecorded: {
      if (spec.recorded.empty()) {
        throw ParameterError("mix_at_snr: recorded noise is empty");
      }
      raw.resize(clean.size());
      const std::size_t len = spec.recorded.size();
      const std::size_t offset = static_cast<std::size_t>(spec.seed % len);
      for (std::size_t i = 0; i < raw.size(); ++i) {
        raw[i] = spec.recorded[(offset + i) % len];
      }
      break;
    }
  }

  const double raw_power = mean_power(raw);
  if (raw_power == 0.0) {
    throw ParameterError("mix_at_snr: noise source has zero power");
  }
  const double target_noise_power =
      signal_power / std::pow(10.0, spec.target_snr_db / 10.0);
  const double gain = std::sqrt(target_noise_power / raw_power);

  MixResult out;
  out.noisy.sample_rate_hz = clean.sample_rate_hz;
  out.noise_only.sample_rate_hz = clean.sample_rate_hz;
  out.noisy.samples.resize(clean.size());
  out.noise_only.samples.resize(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double noisy = clean.samples[i] + gain * raw[i];
    out.noisy.samples[i] = noisy;
    // Recomputed from the rounded sum so that noisy - clean == noise_only.
    out.noise_only.samples[i] = noisy - clean.samples[i];
  }
  return out;
}

SpeakerProfile speaker_profile(int profile_id) {
  // Low-discrepancy walk so that nearby ids land far apart in every
  // dimension at once.
  const double p = static_cast<double>(profile_id);
  SpeakerProfile prof;
  prof.f0_hz = 90.0 + 130.0 * frac(0.11 + p * 0.6180339887);
  prof.formant_hz[0] = 300.0 + 600.0 * frac(0.23 + p * 0.3819660113);
  prof.formant_hz[1] = 900.0 + 1300.0 * frac(0.47 + p * 0.7548776662);
  prof.formant_hz[2] = 2200.0 + 1300.0 * frac(0.31 + p * 0.5698402910);
  return prof;
}

AudioBuffer synth_speaker(int profile_id, int word_id, double duration_s,
                          std::uint64_t seed, int sample_rate_hz) {
  if (!(duration_s > 0.0)) {
    throw ParameterError("synth_speaker: duration_s must be > 0");
  }
  if (sample_rate_hz <= 0) {
    throw ParameterError("synth_speaker: sample rate must be positive");
  }
  const SpeakerProfile prof = speaker_profile(profile_id);
  const auto n = static_cast<std::size_t>(
      std::llround(duration_s * static_cast<double>(sample_rate_hz)));
  const double fs = static_cast<double>(sample_rate_hz);

  std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ull *
                              static_cast<std::uint64_t>(profile_id + 1)) ^
                      (0xC2B2AE3D27D4EB4Full *
                       static_cast<std::uint64_t>(word_id + 1)));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);

  constexpr double kFreqJitter = 0.015;
  constexpr double kAmpJitter = 0.05;
  // Source-filter voice: a harmonic comb under a -6 dB/octave tilt, lifted
  // by three resonances. kBase keeps harmonics between resonances audible.
  constexpr double kBase = 0.25;
  constexpr std::array<double, 3> kGain = {1.0, 0.7, 0.5};
  constexpr std::array<double, 3> kBandwidth = {80.0, 110.0, 150.0};
  constexpr double kTiltHz = 300.0;
  constexpr double kTopHz = 3800.0;

  const double f0 = prof.f0_hz * (1.0 + kFreqJitter * unit(rng));
  std::array<double, 3> formant{};
  for (std::size_t i = 0; i < 3; ++i) {
    formant[i] = prof.formant_hz[i] * (1.0 + kFreqJitter * unit(rng));
  }

  const auto harmonics = static_cast<std::size_t>(std::floor(kTopHz / f0));
  std::vector<double> amp(harmonics), phi(harmonics);
  for (std::size_t h = 0; h < harmonics; ++h) {
    const double f = f0 * static_cast<double>(h + 1);
    double a = kBase;
    for (std::size_t i = 0; i < 3; ++i) {
      const double d = (f - formant[i]) / kBandwidth[i];
      a += kGain[i] / (1.0 + d * d);
    }
    const double tilt = 1.0 / std::sqrt(1.0 + (f / kTiltHz) * (f / kTiltHz));
    amp[h] = 0.3 * tilt * a * (1.0 + kAmpJitter * unit(rng));
    phi[h] = phase(rng);
  }
  const double vibrato_hz = 4.0 + unit(rng);
  const double vibrato_phase = phase(rng);

  // Word identity lives in the syllable envelope: 1..3 bumps whose relative
  // emphasis depends on word_id.
  const int syllables = 1 + (word_id % 3);
  const double emphasis = 0.3 + 0.1 * static_cast<double>((word_id / 3) % 5);

  AudioBuffer out;
  out.sample_rate_hz = sample_rate_hz;
  out.samples.resize(n);
  double base_phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    const double u = static_cast<double>(i) / static_cast<double>(n);
    const double bump = 0.5 - 0.5 * std::cos(kTwoPi * syllables * u);
    const double env = 0.35 + 0.65 * ((1.0 - emphasis) + emphasis * bump);
    double s = 0.0;
    for (std::size_t h = 0; h < harmonics; ++h) {
      s += amp[h] * std::sin(static_cast<double>(h + 1) * base_phase + phi[h]);
    }
    out.samples[i] = env * s;
    base_phase += kTwoPi * f0 *
                  (1.0 + 0.01 * std::sin(kTwoPi * vibrato_hz * t + vibrato_phase)) / fs;
  }

  // Faint recording-room floor so that "clean" is not mathematically silent
  // between partials.
  const double floor_gain = std::sqrt(mean_power(out.samples)) * kRecordingFloor;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& v : out.samples) v += floor_gain * gauss(rng);
  return out;
}

AudioBuffer sine(double freq_hz, double amplitude, std::size_t n,
                 int sample_rate_hz, double phase) {
  AudioBuffer out;
  out.sample_rate_hz = sample_rate_hz;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.samples[i] =
        amplitude * std::sin(kTwoPi * freq_hz * static_cast<double>(i) /
                                 sample_rate_hz + phase);
  }
  return out;
}

}  // namespace melsep
