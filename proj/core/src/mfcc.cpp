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

#include "melsep/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "melsep/error.hpp"
#include "melsep/fft.hpp"
#include "melsep/fir.hpp"

namespace melsep {
namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) { return std::to_string(v); }

}  // namespace

std::string to_string(ChannelId id) {
  switch (id) {
    case ChannelId::kSingle: return "single";
    case ChannelId::kCh1: return "ch1";
    case ChannelId::kCh2: return "ch2";
  }
  return "unknown";
}

ChannelId channel_from_string(const std::string& name) {
  if (name == "single") return ChannelId::kSingle;
  if (name == "ch1") return ChannelId::kCh1;
  if (name == "ch2") return ChannelId::kCh2;
  throw ParameterError("unknown channel id '" + name + "'");
}

std::size_t frame_count(std::size_t len, std::size_t frame_len,
                        std::size_t shift) {
  if (shift == 0 || len < frame_len) return 0;
  return (len - frame_len) / shift + 1;
}

FrameMatrix frame_blocking(const AudioBuffer& buffer, std::size_t frame_len,
                           std::size_t shift) {
  if (frame_len == 0 || shift == 0 || shift > frame_len) {
    throw ParameterError("frame_blocking: need 0 < shift <= frame length (got N=" +
                         std::to_string(frame_len) + ", M=" +
                         std::to_string(shift) + ")");
  }
  if (buffer.size() < frame_len) {
    throw DimensionError("frame_blocking: buffer of " +
                         std::to_string(buffer.size()) +
                         " samples is shorter than one frame of " +
                         std::to_string(frame_len));
  }
  FrameMatrix out;
  out.frame_len = frame_len;
  out.shift = shift;
  out.sample_rate_hz = buffer.sample_rate_hz;
  const std::size_t count = frame_count(buffer.size(), frame_len, shift);
  out.frames = Matrix(count, frame_len);
  for (std::size_t l = 0; l < count; ++l) {
    const auto first = buffer.samples.begin() + static_cast<std::ptrdiff_t>(l * shift);
    std::copy(first, first + static_cast<std::ptrdiff_t>(frame_len),
              out.frames.row(l).begin());
  }
  return out;
}

std::vector<double> hamming_window(std::span<const double> frame) {
  const std::size_t n = frame.size();
  if (n < 2) throw ParameterError("hamming_window: frame needs >= 2 samples");
  std::vector<double> out(n);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = frame[i] * (0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(i) / denom));
  }
  return out;
}

double hz_to_mel(double hz) {
  if (!(hz >= 0.0)) throw ParameterError("hz_to_mel: negative frequency " + num(hz));
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double mel_to_hz(double mel) {
  if (!(mel >= 0.0)) throw ParameterError("mel_to_hz: negative mel value " + num(mel));
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank build_filterbank(double band_lo_hz, double band_hi_hz,
                               std::size_t num_filters, std::size_t fft_size,
                               int sample_rate_hz, ChannelId channel) {
  if (num_filters == 0) throw ParameterError("build_filterbank: need >= 1 filter");
  if (!is_power_of_two(fft_size)) {
    throw ParameterError("build_filterbank: FFT size must be a power of two");
  }
  if (sample_rate_hz <= 0) throw ParameterError("build_filterbank: bad sample rate");
  const double nyquist = sample_rate_hz / 2.0;
  if (!(band_lo_hz >= 0.0 && band_lo_hz < band_hi_hz && band_hi_hz <= nyquist)) {
    throw ParameterError("build_filterbank: band [" + num(band_lo_hz) + ", " +
                         num(band_hi_hz) + "] Hz must satisfy 0 <= lo < hi <= " +
                         num(nyquist));
  }

  MelFilterbank bank;
  bank.num_filters = num_filters;
  bank.band_lo_hz = band_lo_hz;
  bank.band_hi_hz = band_hi_hz;
  bank.fft_size = fft_size;
  bank.sample_rate_hz = sample_rate_hz;
  bank.channel = channel;

  const double mel_lo = hz_to_mel(band_lo_hz);
  const double mel_hi = hz_to_mel(band_hi_hz);
  const std::size_t points = num_filters + 2;
  const double bins_per_hz = static_cast<double>(fft_size) / sample_rate_hz;
  const std::size_t last_bin = fft_size / 2;

  bank.boundary_bins.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double mel =
        mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / (points - 1);
    const double hz = i == 0 ? band_lo_hz
                      : i == points - 1 ? band_hi_hz
                                        : mel_to_hz(mel);
    const double pos = hz * bins_per_hz;
    double bin = std::round(pos);
    if (i == 0) bin = std::floor(pos);
    if (i == points - 1) bin = std::ceil(pos);
    bank.boundary_bins[i] = std::min(static_cast<std::size_t>(bin), last_bin);
    if (i > 0 && i < points - 1) bank.center_hz.push_back(hz);
  }
  for (std::size_t i = 1; i < points; ++i) {
    if (bank.boundary_bins[i] <= bank.boundary_bins[i - 1]) {
      throw ParameterError("build_filterbank: band [" + num(band_lo_hz) + ", " +
                           num(band_hi_hz) + "] Hz is too narrow for " +
                           std::to_string(num_filters) +
                           " filters at FFT size " + std::to_string(fft_size));
    }
  }

  bank.weights = Matrix(num_filters, last_bin + 1);
  for (std::size_t m = 1; m <= num_filters; ++m) {
    const auto left = static_cast<double>(bank.boundary_bins[m - 1]);
    const auto peak = static_cast<double>(bank.boundary_bins[m]);
    const auto right = static_cast<double>(bank.boundary_bins[m + 1]);
    auto row = bank.weights.row(m - 1);
    for (std::size_t k = bank.boundary_bins[m - 1]; k <= bank.boundary_bins[m + 1]; ++k) {
      const auto kf = static_cast<double>(k);
      row[k] = kf <= peak ? (kf - left) / (peak - left) : (right - kf) / (right - peak);
    }
  }
  return bank;
}

std::vector<double> log_mel_energies(std::span<const double> power_spectrum,
                                     const MelFilterbank& bank) {
  if (power_spectrum.size() != bank.weights.cols()) {
    throw DimensionError("log_mel_energies: spectrum has " +
                         std::to_string(power_spectrum.size()) +
                         " bins, filterbank expects " +
                         std::to_string(bank.weights.cols()));
  }
  std::vector<double> out(bank.num_filters);
  for (std::size_t m = 0; m < bank.num_filters; ++m) {
    const auto row = bank.weights.row(m);
    double acc = 0.0;
    for (std::size_t k = bank.boundary_bins[m]; k <= bank.boundary_bins[m + 2]; ++k) {
      acc += power_spectrum[k] * row[k];
    }
    out[m] = std::log(std::max(acc, kLogEnergyFloor));
  }
  return out;
}

std::vector<double> dct_cepstra(std::span<const double> log_energies,
                                std::size_t num_coeffs) {
  const std::size_t p = log_energies.size();
  if (num_coeffs < 1 || num_coeffs > p) {
    throw ParameterError("dct_cepstra: need 1 <= Q <= P (Q=" +
                         std::to_string(num_coeffs) + ", P=" +
                         std::to_string(p) + ")");
  }
  std::vector<double> out(num_coeffs);
  for (std::size_t q = 1; q <= num_coeffs; ++q) {
    double acc = 0.0;
    for (std::size_t m = 1; m <= p; ++m) {
      acc += log_energies[m - 1] *
             std::cos(static_cast<double>(m) * (static_cast<double>(q) - 0.5) *
                      kPi / static_cast<double>(p));
    }
    out[q - 1] = acc;
  }
  return out;
}

void ExtractionConfig::validate(int sample_rate_hz) const {
  const auto fail = [](const std::string& field, const std::string& why) {
    throw ParameterError("extraction." + field + ": " + why);
  };
  if (sample_rate_hz <= 0) fail("sample_rate", "must be positive");
  const double nyquist = sample_rate_hz / 2.0;
  if (frame_len < 2) fail("frame_len", "must be >= 2");
  if (frame_shift == 0 || frame_shift > frame_len) {
    fail("frame_shift", "must satisfy 0 < frame_shift <= frame_len");
  }
  if (!is_power_of_two(fft_size)) fail("fft_size", "must be a power of two");
  if (fft_size < frame_len) fail("fft_size", "must be >= frame_len");
  if (!(band_lo_hz >= 0.0)) fail("band_lo_hz", "must be >= 0");
  if (!(band_hi_hz < nyquist)) {
    fail("band_hi_hz", num(band_hi_hz) + " must be below Nyquist (" + num(nyquist) + ")");
  }
  if (!(band_lo_hz < split_hz && split_hz < band_hi_hz)) {
    fail("split_hz", "must lie strictly between band_lo_hz and band_hi_hz");
  }
  if (single_filters == 0) fail("single_filters", "must be >= 1");
  if (ch1_filters == 0) fail("ch1_filters", "must be >= 1");
  if (ch2_filters == 0) fail("ch2_filters", "must be >= 1");
  if (num_coeffs == 0) fail("num_coeffs", "must be >= 1");
  if (num_coeffs > std::min({single_filters, ch1_filters, ch2_filters})) {
    fail("num_coeffs", "must not exceed any filter count");
  }
  if (fir_taps < 3 || fir_taps % 2 == 0) fail("fir_taps", "must be odd and >= 3");
}

FeatureMatrix extract_with_bank(const AudioBuffer& buffer,
                                const MelFilterbank& bank,
                                const ExtractionConfig& cfg,
                                std::string source_id) {
  if (bank.sample_rate_hz != buffer.sample_rate_hz) {
    throw ParameterError("extract: filterbank designed for " +
                         std::to_string(bank.sample_rate_hz) +
                         " Hz, buffer is " +
                         std::to_string(buffer.sample_rate_hz) + " Hz");
  }
  const FrameMatrix frames = frame_blocking(buffer, cfg.frame_len, cfg.frame_shift);
  FeatureMatrix out;
  out.num_coeffs = cfg.num_coeffs;
  out.channel = bank.channel;
  out.source_id = std::move(source_id);
  out.rows = Matrix(0, cfg.num_coeffs);
  for (std::size_t l = 0; l < frames.frames.rows(); ++l) {
    const auto windowed = hamming_window(frames.frames.row(l));
    const auto power = fft_magnitude_sq(windowed, bank.fft_size);
    const auto energies = log_mel_energies(power, bank);
    out.rows.append_row(dct_cepstra(energies, cfg.num_coeffs));
  }
  return out;
}

FeatureMatrix extract_single_channel(const AudioBuffer& buffer,
                                     const ExtractionConfig& cfg,
                                     std::string source_id) {
  cfg.validate(buffer.sample_rate_hz);
  const auto bank = build_filterbank(cfg.band_lo_hz, cfg.band_hi_hz,
                                     cfg.single_filters, cfg.fft_size,
                                     buffer.sample_rate_hz, ChannelId::kSingle);
  return extract_with_bank(buffer, bank, cfg, std::move(source_id));
}

DualFeatures extract_dual_channel(const AudioBuffer& buffer,
                                  const ExtractionConfig& cfg,
                                  std::string source_id) {
  cfg.validate(buffer.sample_rate_hz);
  const auto channels =
      split_channels(buffer, cfg.split_hz, cfg.band_hi_hz, cfg.fir_taps);
  const auto bank1 = build_filterbank(cfg.band_lo_hz, cfg.split_hz, cfg.ch1_filters,
                                      cfg.fft_size, buffer.sample_rate_hz,
                                      ChannelId::kCh1);
  const auto bank2 = build_filterbank(cfg.split_hz, cfg.band_hi_hz, cfg.ch2_filters,
                                      cfg.fft_size, buffer.sample_rate_hz,
                                      ChannelId::kCh2);
  return {extract_with_bank(channels.ch1, bank1, cfg, source_id),
          extract_with_bank(channels.ch2, bank2, cfg, std::move(source_id))};
}

}  // namespace melsep
