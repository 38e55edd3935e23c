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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "melsep/audio.hpp"
#include "melsep/matrix.hpp"

namespace melsep {

enum class ChannelId { kSingle, kCh1, kCh2 };

std::string to_string(ChannelId id);
// Inverse of to_string; throws ParameterError for unknown names.
ChannelId channel_from_string(const std::string& name);

// Overlapping analysis frames: row l holds samples [l*shift, l*shift + N).
struct FrameMatrix {
  Matrix frames;
  std::size_t frame_len = 0;
  std::size_t shift = 0;
  int sample_rate_hz = kDefaultSampleRate;
};

// Trailing samples that do not fill a whole frame are dropped.
// Throws ParameterError unless 0 < shift <= frame_len, DimensionError if the
// buffer is shorter than one frame.
FrameMatrix frame_blocking(const AudioBuffer& buffer, std::size_t frame_len,
                           std::size_t shift);

// Number of frames frame_blocking produces for `len` samples.
std::size_t frame_count(std::size_t len, std::size_t frame_len,
                        std::size_t shift);

// frame[n] * (0.54 - 0.46 cos(2 pi n / (N - 1))).
// Throws ParameterError for frames shorter than 2 samples.
std::vector<double> hamming_window(std::span<const double> frame);

// 2595 * log10(1 + f / 700). Throws ParameterError for f < 0.
double hz_to_mel(double hz);
// Inverse of hz_to_mel. Throws ParameterError for m < 0.
double mel_to_hz(double mel);

// Unit-peak triangular filters over the one-sided power spectrum.
struct MelFilterbank {
  std::size_t num_filters = 0;
  double band_lo_hz = 0.0;
  double band_hi_hz = 0.0;
  std::size_t fft_size = 0;
  int sample_rate_hz = kDefaultSampleRate;
  ChannelId channel = ChannelId::kSingle;
  // num_filters + 2 boundary bins; filter m rises over [b[m-1], b[m]] and
  // falls over [b[m], b[m+1]] (1-based m).
  std::vector<std::size_t> boundary_bins;
  Matrix weights;  // num_filters x (fft_size / 2 + 1)

  // Centre frequency of each filter in Hz (the exact mel-grid value, before
  // rounding to a bin).
  std::vector<double> center_hz;
};

// Boundaries are equally spaced on the mel axis between the band edges and
// rounded to FFT bins (the lower edge rounds down, the upper edge up).
// Throws ParameterError if the band is invalid or too narrow to give
// num_filters + 2 distinct bins.
MelFilterbank build_filterbank(double band_lo_hz, double band_hi_hz,
                               std::size_t num_filters, std::size_t fft_size,
                               int sample_rate_hz,
                               ChannelId channel = ChannelId::kSingle);

inline constexpr double kLogEnergyFloor = 1e-12;

// a_m = ln(max(sum_k P(k) H_m(k), 1e-12)).
// Throws DimensionError when the spectrum length differs from the bank width.
std::vector<double> log_mel_energies(std::span<const double> power_spectrum,
                                     const MelFilterbank& bank);

// C_q = sum_{m=1..P} a_m cos(m (q - 1/2) pi / P), q = 1..Q.
// Throws ParameterError unless 1 <= Q <= P.
std::vector<double> dct_cepstra(std::span<const double> log_energies,
                                std::size_t num_coeffs);

struct ExtractionConfig {
  std::size_t frame_len = 400;
  std::size_t frame_shift = 160;
  std::size_t fft_size = 512;
  std::size_t num_coeffs = 12;
  // Full-band bank for the single-channel method.
  double band_lo_hz = 0.0;
  double band_hi_hz = 4000.0;
  std::size_t single_filters = 26;
  // Dual-channel split: ch1 = [band_lo, split], ch2 = [split, band_hi].
  double split_hz = 1000.0;
  std::size_t ch1_filters = 13;
  std::size_t ch2_filters = 13;
  int fir_taps = 101;

  // Throws ParameterError naming the first inconsistent field.
  void validate(int sample_rate_hz) const;

  friend bool operator==(const ExtractionConfig&, const ExtractionConfig&) = default;
};

// Per-frame cepstral rows of one channel of one utterance.
struct FeatureMatrix {
  Matrix rows;  // frames x num_coeffs
  std::size_t num_coeffs = 0;
  ChannelId channel = ChannelId::kSingle;
  std::string source_id;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

// Frame blocking, Hamming window, power spectrum, log mel energies and DCT
// over one bank.
FeatureMatrix extract_with_bank(const AudioBuffer& buffer,
                                const MelFilterbank& bank,
                                const ExtractionConfig& cfg,
                                std::string source_id = {});

// One full-band bank (band_lo..band_hi, single_filters).
FeatureMatrix extract_single_channel(const AudioBuffer& buffer,
                                     const ExtractionConfig& cfg,
                                     std::string source_id = {});

struct DualFeatures {
  FeatureMatrix ch1;
  FeatureMatrix ch2;
};

// FIR channel split followed by an independent filterbank per channel.
DualFeatures extract_dual_channel(const AudioBuffer& buffer,
                                  const ExtractionConfig& cfg,
                                  std::string source_id = {});

}  // namespace melsep
