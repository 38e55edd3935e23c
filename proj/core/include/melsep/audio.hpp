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

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace melsep {

inline constexpr int kDefaultSampleRate = 16000;

// Mono sample sequence, nominal range [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate_hz = kDefaultSampleRate;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  double duration_s() const noexcept {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }

  friend bool operator==(const AudioBuffer&, const AudioBuffer&) = default;
};

enum class NoiseKind { kWhiteGaussian, kRecorded };

// Describes the additive noise of one experimental condition. For
// kRecorded, `recorded` holds the user-supplied noise, which is looped or
// truncated to the clean length starting at offset `seed % recorded.size()`.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::kWhiteGaussian;
  double target_snr_db = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> recorded;
};

struct MixResult {
  AudioBuffer noisy;
  // Exactly noisy - clean; serves as the ANC reference input.
  AudioBuffer noise_only;
};

// Mean of x^2. Zero for an empty span.
double mean_power(std::span<const double> x);

// Root mean square.
double rms(std::span<const double> x);

// 10*log10(P(clean) / P(noisy - clean)). Returns +infinity when the two
// buffers are identical.
// Throws DimensionError on length/rate mismatch, UndefinedSnrError when
// clean has zero power.
double measure_snr_db(const AudioBuffer& clean, const AudioBuffer& noisy);

// Adds noise scaled so that measure_snr_db(clean, noisy) hits the target.
MixResult mix_at_snr(const AudioBuffer& clean, const NoiseSpec& spec);

// Unit-variance white Gaussian noise, deterministic in `seed`.
std::vector<double> white_noise(std::size_t n, std::uint64_t seed);

// Parameters of one synthetic talker. Derived from the profile id alone, so
// every utterance of a profile shares them.
struct SpeakerProfile {
  double f0_hz = 0.0;
  std::array<double, 3> formant_hz{};
};

SpeakerProfile speaker_profile(int profile_id);

// Deterministic multi-formant "word" utterance: a harmonic voice on the
// profile's fundamental, lifted around its three resonant bands, with a
// word-dependent syllable envelope, small seeded jitter and a faint noise
// floor. Throws ParameterError when duration_s <= 0.
AudioBuffer synth_speaker(int profile_id, int word_id, double duration_s,
                          std::uint64_t seed,
                          int sample_rate_hz = kDefaultSampleRate);

// Pure tone helper used by tests, tools and benchmarks.
AudioBuffer sine(double freq_hz, double amplitude, std::size_t n,
                 int sample_rate_hz = kDefaultSampleRate, double phase = 0.0);

}  // namespace melsep
