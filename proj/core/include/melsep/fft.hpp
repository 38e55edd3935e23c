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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace melsep {

constexpr bool is_power_of_two(std::size_t n) {
  return n != 0 && (n & (n - 1)) == 0;
}

// In-place iterative radix-2 decimation-in-time FFT,
// X(k) = sum_n x(n) exp(-j 2 pi k n / K).
// Throws ParameterError if the size is not a power of two.
void fft_inplace(std::span<std::complex<double>> data);

// Zero-pads `frame` to fft_size and returns |X(k)|^2 for k = 0..K/2.
// Throws ParameterError if fft_size is not a power of two or is shorter than
// the frame.
std::vector<double> fft_magnitude_sq(std::span<const double> frame,
                                     std::size_t fft_size);

}  // namespace melsep
