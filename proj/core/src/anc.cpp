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

#include "melsep/anc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "melsep/error.hpp"

namespace melsep {

LmsState LmsState::from_config(const LmsConfig& config) {
  if (config.order < 0) {
    throw ParameterError("LmsConfig: order must be >= 0");
  }
  if (!(config.step > 0.0) || !std::isfinite(config.step)) {
    throw ParameterError("LmsConfig: step must be a positive finite number");
  }
  const auto taps = static_cast<std::size_t>(config.order) + 1;
  LmsState state;
  if (config.initial_weights.empty()) {
    state.weights.assign(taps, 0.0);
  } else if (config.initial_weights.size() != taps) {
    throw ParameterError("LmsConfig: initial_weights has " +
                         std::to_string(config.initial_weights.size()) +
                         " entries, expected " + std::to_string(taps));
  } else {
    state.weights = config.initial_weights;
  }
  state.delay_line.assign(taps, 0.0);
  return state;
}

double combiner_output(const LmsState& state) {
  double y = 0.0;
  const std::size_t n = std::min(state.weights.size(), state.delay_line.size());
  for (std::size_t l = 0; l < n; ++l) y += state.weights[l] * state.delay_line[l];
  return y;
}

LmsStepResult lms_step(LmsState& state, double desired, double reference,
                       double step) {
  if (!(step > 0.0)) throw ParameterError("lms_step: step must be > 0");
  if (!std::isfinite(desired) || !std::isfinite(reference)) {
    throw ParameterError("lms_step: non-finite input at step " +
                         std::to_string(state.k));
  }
  if (state.weights.size() != state.delay_line.size() || state.weights.empty()) {
    throw DimensionError("lms_step: weights and delay line differ in length");
  }

  auto& x = state.delay_line;
  std::shift_right(x.begin(), x.end(), 1);
  x[0] = reference;

  LmsStepResult r;
  r.output = combiner_output(state);
  r.error = desired - r.output;

  const double g = 2.0 * step * r.error;
  bool finite = true;
  for (std::size_t l = 0; l < x.size(); ++l) {
    state.weights[l] += g * x[l];
    finite = finite && std::isfinite(state.weights[l]);
  }
  if (!finite) {
    throw DivergenceError(state.k, "LMS diverged at step " +
                                       std::to_string(state.k) +
                                       " (non-finite weight)");
  }
  ++state.k;
  return r;
}

AncResult run_anc(const AudioBuffer& primary, const AudioBuffer& reference,
                  const LmsConfig& config) {
  if (primary.size() != reference.size()) {
    throw DimensionError("run_anc: primary has " +
                         std::to_string(primary.size()) +
                         " samples, reference has " +
                         std::to_string(reference.size()));
  }
  if (primary.sample_rate_hz != reference.sample_rate_hz) {
    throw DimensionError("run_anc: sample rate mismatch");
  }

  LmsState state = LmsState::from_config(config);
  AncResult out;
  out.error_signal.sample_rate_hz = primary.sample_rate_hz;
  out.combiner_output.sample_rate_hz = primary.sample_rate_hz;
  out.error_signal.samples.resize(primary.size());
  out.combiner_output.samples.resize(primary.size());
  for (std::size_t i = 0; i < primary.size(); ++i) {
    const auto r =
        lms_step(state, primary.samples[i], reference.samples[i], config.step);
    out.error_signal.samples[i] = r.error;
    out.combiner_output.samples[i] = r.output;
  }
  out.mse_trace = mse_trace(out.error_signal.samples, kMseWindow);
  out.final_weights = std::move(state.weights);
  return out;
}

std::vector<double> mse_trace(std::span<const double> errors,
                              std::size_t window) {
  if (window == 0) throw ParameterError("mse_trace: window must be >= 1");
  std::vector<double> trace;
  trace.reserve((errors.size() + window - 1) / window);
  for (std::size_t start = 0; start < errors.size(); start += window) {
    const std::size_t end = std::min(errors.size(), start + window);
    double acc = 0.0;
    for (std::size_t i = start; i < end; ++i) acc += errors[i] * errors[i];
    trace.push_back(acc / static_cast<double>(end - start));
  }
  return trace;
}

}  // namespace melsep
