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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "melsep/cluster.hpp"
#include "melsep/config.hpp"
#include "melsep/corpus.hpp"

namespace melsep {

enum class Method { kSingle, kDual };

std::string to_string(Method m);
// Throws ParameterError for anything but "single" / "dual".
Method method_from_string(const std::string& name);

// Internal SNR used for the noise-free condition.
inline constexpr double kCleanSnrDb = 60.0;

struct SnrPoint {
  bool clean = false;
  double db = 0.0;

  double effective_db() const noexcept { return clean ? kCleanSnrDb : db; }
  std::string label() const;

  static SnrPoint Clean() { return {true, kCleanSnrDb}; }
  static SnrPoint Db(double v) { return {false, v}; }

  friend bool operator==(const SnrPoint&, const SnrPoint&) = default;
};

struct ExperimentPlan {
  std::vector<SnrPoint> snr_points = {SnrPoint::Clean(), SnrPoint::Db(0),
                                      SnrPoint::Db(-6), SnrPoint::Db(-10),
                                      SnrPoint::Db(-16)};
  std::vector<Method> methods = {Method::kSingle, Method::kDual};
  std::vector<bool> anc = {false, true};
  std::string corpus;  // manifest path; empty means "synthesize in memory"
  std::size_t trials = 80;
  std::uint64_t master_seed = 1;
  // Worker threads for independent cells; 0 means hardware concurrency.
  unsigned threads = 0;

  // Throws ConfigError naming the offending field.
  void validate() const;

  friend bool operator==(const ExperimentPlan&, const ExperimentPlan&) = default;
};

ExperimentPlan parse_plan(const std::string& json_text);
ExperimentPlan load_plan(const std::filesystem::path& path);
std::string plan_json(const ExperimentPlan& plan);

struct SweepCell {
  Method method = Method::kSingle;
  bool anc = false;
  SnrPoint snr;
  ConfusionCounts counts;
  double accuracy = 0.0;
  double wall_time_ms = 0.0;
  std::optional<std::string> error;
};

struct SweepReport {
  ExperimentPlan plan;
  PipelineConfig config;
  std::string corpus_digest;
  // Clean-split calibration, one per method.
  std::map<Method, ThresholdCalibration> thresholds;
  std::vector<SweepCell> cells;  // sorted by (method, anc, snr)

  bool has_errors() const;
};

// Runs every (method, anc, snr) cell of the plan.
//
// The corpus supplies the enrolled reference utterances. Words are split in
// half: the first half (by word id) forms a clean calibration split that
// fixes one threshold per method, the second half is evaluated. For each
// evaluated reference a fresh test utterance of the same profile and word is
// synthesized (the genuine pair) and one of a different profile is drawn as
// impostor. The same test utterances, pairings and noise waveforms are used
// in every cell, so cells differ only in SNR, method and ANC.
//
// Throws ConfigError for an invalid plan or an unusable corpus. Errors inside
// a cell are recorded on that cell.
SweepReport run_sweep(const ExperimentPlan& plan, const Corpus& corpus,
                      const PipelineConfig& config = default_pipeline_config());

// Report as JSON. Wall times are omitted unless requested so that repeated
// runs produce identical bytes.
std::string report_json(const SweepReport& report, bool include_timing = false);

// CSV: method,anc,snr_db,tp,tn,fp,fn,accuracy with one row per cell in
// (method, anc, snr) order. Errored cells leave the counts empty.
std::string curves_csv(const SweepReport& report);

// Writes curves_csv. Throws ParameterError for an empty report, IoError on
// write failure.
void emit_curves(const SweepReport& report, const std::filesystem::path& path);

}  // namespace melsep
