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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "melsep/audio.hpp"

namespace melsep {

enum class FilterKind { kLowpass, kHighpass, kBandpass };

std::string to_string(FilterKind kind);

// Linear-phase (odd length, symmetric) FIR impulse response.
struct FilterKernel {
  std::vector<double> taps;
  FilterKind kind = FilterKind::kLowpass;
  double cutoff_low_hz = 0.0;   // highpass / bandpass
  double cutoff_high_hz = 0.0;  // lowpass / bandpass
  int sample_rate_hz = kDefaultSampleRate;

  friend bool operator==(const FilterKernel&, const FilterKernel&) = default;
};

inline constexpr int kDefaultFirTaps = 101;

// Hamming-windowed sinc lowpass, normalized to unit DC gain.
FilterKernel design_lowpass(double cutoff_hz, int num_taps, int sample_rate_hz);

// Spectral inversion of the windowed lowpass, normalized to unit gain at
// Nyquist.
FilterKernel design_highpass(double cutoff_hz, int num_taps, int sample_rate_hz);

// Difference of two unit-DC windowed lowpasses, normalized to unit gain at the
// geometric-mean frequency sqrt(low * high).
FilterKernel design_bandpass(double low_hz, double high_hz, int num_taps,
                             int sample_rate_hz);

// |H(f)| by direct summation over the taps.
double magnitude_response(const std::vector<double>& taps, double freq_hz,
                          int sample_rate_hz);

// Full convolution trimmed by (N-1)/2 at each end, so the output is aligned
// with and as long as the input.
// Throws DimensionError if the buffer is not longer than the kernel,
// ParameterError on a sample-rate mismatch.
AudioBuffer filter_zero_phase(const AudioBuffer& buffer,
                              const FilterKernel& kernel);

struct ChannelPair {
  AudioBuffer ch1;  // below split_hz
  AudioBuffer ch2;  // split_hz .. top_hz
};

// Channel 1 = lowpass(split_hz), channel 2 = bandpass(split_hz, top_hz).
ChannelPair split_channels(const AudioBuffer& buffer, double split_hz,
                           double top_hz, int num_taps = kDefaultFirTaps);

// Tap table as CSV ("index,coefficient").
void write_kernel_csv(const FilterKernel& kernel,
                      const std::filesystem::path& path);

}  // namespace melsep
