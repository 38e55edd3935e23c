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
#include <string>

#include "melsep/anc.hpp"
#include "melsep/cluster.hpp"
#include "melsep/corpus.hpp"
#include "melsep/mfcc.hpp"

namespace melsep {

struct AncOptions {
  LmsConfig lms;
  // Divide the step size by the primary (noisy input) power before running.
  // Misadjustment then scales with the noise share of the input, so a nearly
  // clean input passes through almost untouched.
  bool normalize_step = true;

  friend bool operator==(const AncOptions& a, const AncOptions& b) {
    return a.lms.order == b.lms.order && a.lms.step == b.lms.step &&
           a.lms.initial_weights == b.lms.initial_weights &&
           a.normalize_step == b.normalize_step;
  }
};

// Every tunable of the pipeline. Defaults are the values the library is
// tested with.
struct PipelineConfig {
  int sample_rate_hz = kDefaultSampleRate;
  ExtractionConfig extraction;
  AncOptions anc;
  KMeansOptions kmeans;
  std::uint64_t cluster_seed = 7;
  // Decision thresholds for the verdict command, one per method.
  double threshold_single = 0.0;
  double threshold_dual = 0.0;
  CorpusSpec corpus;

  // Throws ConfigError naming the first invalid field.
  void validate() const;

  friend bool operator==(const PipelineConfig& a, const PipelineConfig& b);
};

// Defaults with calibrated thresholds filled in.
PipelineConfig default_pipeline_config();

// Reads a JSON config. Absent fields keep their defaults; unknown fields and
// type errors are rejected with ConfigError naming the field path
// (e.g. "extraction.fft_size").
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(const std::string& json_text,
                            const PipelineConfig& base = default_pipeline_config());

std::string config_json(const PipelineConfig& config);
void save_config(const PipelineConfig& config, const std::filesystem::path& path);

// The step actually used by the canceller for a given primary input.
double effective_step(const AncOptions& options, const AudioBuffer& primary);

// run_anc with effective_step applied.
AncResult run_anc(const AudioBuffer& primary, const AudioBuffer& reference,
                  const AncOptions& options);

}  // namespace melsep
