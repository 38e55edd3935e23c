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
#include <vector>

#include "melsep/audio.hpp"

namespace melsep {

// Tapped-delay-line adaptive linear combiner configuration. `order` is the
// highest delay, so the filter has order + 1 weights.
struct LmsConfig {
  int order = 31;
  double step = 0.005;
  // Empty means all-zero; otherwise must have order + 1 entries.
  std::vector<double> initial_weights;
};

// weights[l] multiplies delay_line[l] == x_{k-l}.
struct LmsState {
  std::vector<double> weights;
  std::vector<double> delay_line;
  std::size_t k = 0;

  // Fresh state for `config`; validates it (ParameterError).
  static LmsState from_config(const LmsConfig& config);

  friend bool operator==(const LmsState&, const LmsState&) = default;
};

struct LmsStepResult {
  double error = 0.0;   // e_k = d_k - y_k
  double output = 0.0;  // y_k
};

struct AncResult {
  AudioBuffer error_signal;     // denoised estimate
  AudioBuffer combiner_output;  // noise estimate
  std::vector<double> mse_trace;
  std::vector<double> final_weights;

  friend bool operator==(const AncResult&, const AncResult&) = default;
};

inline constexpr std::size_t kMseWindow = 256;

// Dot product of weights and delay line.
double combiner_output(const LmsState& state);

// One LMS iteration: push x_k into the delay line, form y_k, e_k and update
// w += 2 * step * e_k * X_k. The state is updated in place.
// Throws ParameterError for step <= 0 or non-finite inputs, DivergenceError
// if any weight becomes non-finite.
LmsStepResult lms_step(LmsState& state, double desired, double reference,
                       double step);

// Runs the canceller over the whole primary input.
// Throws DimensionError when the inputs differ in length or rate.
AncResult run_anc(const AudioBuffer& primary, const AudioBuffer& reference,
                  const LmsConfig& config);

// Mean of e^2 over consecutive non-overlapping windows; a trailing partial
// window contributes its own mean. Throws ParameterError for window == 0.
std::vector<double> mse_trace(std::span<const double> errors,
                              std::size_t window);

}  // namespace melsep
