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

#include "melsep/fir.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "melsep/error.hpp"

namespace melsep {
namespace {

constexpr double kPi = std::numbers::pi;

void check_taps(int num_taps) {
  if (num_taps < 3 || num_taps % 2 == 0) {
    throw ParameterError("FIR tap count must be odd and >= 3 (got " +
                         std::to_string(num_taps) + ")");
  }
}

void check_cutoff(double hz, int sample_rate_hz, const char* name) {
  if (sample_rate_hz <= 0) throw ParameterError("sample rate must be positive");
  const double nyquist = sample_rate_hz / 2.0;
  if (!(hz > 0.0 && hz < nyquist)) {
    throw ParameterError(std::string(name) + " " + std::to_string(hz) +
                         " Hz is outside (0, " + std::to_string(nyquist) + ")");
  }
}

// (W/pi) * sinc(W * (n - M)) * hamming(n), no normalization.
std::vector<double> windowed_sinc(double cutoff_hz, int num_taps,
                                  int sample_rate_hz) {
  const double omega = 2.0 * kPi * cutoff_hz / sample_rate_hz;
  const int mid = (num_taps - 1) / 2;
  std::vector<double> h(static_cast<std::size_t>(num_taps));
  for (int n = 0; n < num_taps; ++n) {
    // Index from the centre outwards so the two halves are bit-identical.
    const int m = n - mid;
    const double x = omega * std::abs(m);
    const double sinc = m == 0 ? 1.0 : std::sin(x) / x;
    const double window =
        0.54 - 0.46 * std::cos(2.0 * kPi * (mid + std::abs(m)) / (num_taps - 1));
    h[static_cast<std::size_t>(n)] = omega / kPi * sinc * window;
  }
  return h;
}

void scale(std::vector<double>& h, double gain) {
  for (double& v : h) v *= gain;
}

}  // namespace

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::kLowpass: return "lowpass";
    case FilterKind::kHighpass: return "highpass";
    case FilterKind::kBandpass: return "bandpass";
  }
  return "unknown";
}

double magnitude_response(const std::vector<double>& taps, double freq_hz,
                          int sample_rate_hz) {
  const double w = 2.0 * kPi * freq_hz / sample_rate_hz;
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t n = 0; n < taps.size(); ++n) {
    acc += taps[n] * std::polar(1.0, -w * static_cast<double>(n));
  }
  return std::abs(acc);
}

FilterKernel design_lowpass(double cutoff_hz, int num_taps, int sample_rate_hz) {
  check_taps(num_taps);
  check_cutoff(cutoff_hz, sample_rate_hz, "lowpass cutoff");
  FilterKernel k;
  k.kind = FilterKind::kLowpass;
  k.cutoff_high_hz = cutoff_hz;
  k.sample_rate_hz = sample_rate_hz;
  k.taps = windowed_sinc(cutoff_hz, num_taps, sample_rate_hz);
  double dc = 0.0;
  for (double v : k.taps) dc += v;
  scale(k.taps, 1.0 / dc);
  return k;
}

FilterKernel design_highpass(double cutoff_hz, int num_taps,
                             int sample_rate_hz) {
  FilterKernel k = design_lowpass(cutoff_hz, num_taps, sample_rate_hz);
  k.kind = FilterKind::kHighpass;
  k.cutoff_low_hz = cutoff_hz;
  k.cutoff_high_hz = 0.0;
  for (double& v : k.taps) v = -v;
  k.taps[k.taps.size() / 2] += 1.0;
  // Symmetric odd-length kernel: H(pi) = sum (-1)^n h[n].
  double nyquist = 0.0;
  for (std::size_t n = 0; n < k.taps.size(); ++n) {
    nyquist += (n % 2 == 0 ? 1.0 : -1.0) * k.taps[n];
  }
  scale(k.taps, 1.0 / std::abs(nyquist));
  return k;
}

FilterKernel design_bandpass(double low_hz, double high_hz, int num_taps,
                             int sample_rate_hz) {
  check_taps(num_taps);
  check_cutoff(low_hz, sample_rate_hz, "bandpass low edge");
  check_cutoff(high_hz, sample_rate_hz, "bandpass high edge");
  if (!(low_hz < high_hz)) {
    throw ParameterError("bandpass low edge must be below high edge");
  }
  // Unit-DC lowpasses, so the difference blocks DC.
  const auto hi = design_lowpass(high_hz, num_taps, sample_rate_hz).taps;
  const auto lo = design_lowpass(low_hz, num_taps, sample_rate_hz).taps;
  FilterKernel k;
  k.kind = FilterKind::kBandpass;
  k.cutoff_low_hz = low_hz;
  k.cutoff_high_hz = high_hz;
  k.sample_rate_hz = sample_rate_hz;
  k.taps.resize(hi.size());
  for (std::size_t n = 0; n < hi.size(); ++n) k.taps[n] = hi[n] - lo[n];
  const double centre = std::sqrt(low_hz * high_hz);
  scale(k.taps, 1.0 / magnitude_response(k.taps, centre, sample_rate_hz));
  return k;
}

AudioBuffer filter_zero_phase(const AudioBuffer& buffer,
                              const FilterKernel& kernel) {
  if (buffer.sample_rate_hz != kernel.sample_rate_hz) {
    throw ParameterError("filter_zero_phase: buffer is " +
                         std::to_string(buffer.sample_rate_hz) +
                         " Hz but kernel was designed for " +
                         std::to_string(kernel.sample_rate_hz) + " Hz");
  }
  const std::size_t n = buffer.size();
  const std::size_t taps = kernel.taps.size();
  if (n <= taps) {
    throw DimensionError("filter_zero_phase: buffer of " + std::to_string(n) +
                         " samples is not longer than the " +
                         std::to_string(taps) + "-tap kernel");
  }
  const std::size_t delay = (taps - 1) / 2;
  AudioBuffer out;
  out.sample_rate_hz = buffer.sample_rate_hz;
  out.samples.assign(n, 0.0);
  // out[i] = full[i + delay] = sum_j h[j] * x[i + delay - j]
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pos = i + delay;
    const std::size_t j_lo = pos >= n ? pos - n + 1 : 0;
    const std::size_t j_hi = std::min(taps - 1, pos);
    double acc = 0.0;
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
      acc += kernel.taps[j] * buffer.samples[pos - j];
    }
    out.samples[i] = acc;
  }
  return out;
}

ChannelPair split_channels(const AudioBuffer& buffer, double split_hz,
                           double top_hz, int num_taps) {
  if (!(split_hz < top_hz)) {
    throw ParameterError("split_channels: split frequency must be below top");
  }
  const auto lp = design_lowpass(split_hz, num_taps, buffer.sample_rate_hz);
  const auto bp =
      design_bandpass(split_hz, top_hz, num_taps, buffer.sample_rate_hz);
  return {filter_zero_phase(buffer, lp), filter_zero_phase(buffer, bp)};
}

void write_kernel_csv(const FilterKernel& kernel,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "index,coefficient\n";
  char line[64];
  for (std::size_t i = 0; i < kernel.taps.size(); ++i) {
    std::snprintf(line, sizeof line, "%zu,%.17g\n", i, kernel.taps[i]);
    out << line;
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace melsep
