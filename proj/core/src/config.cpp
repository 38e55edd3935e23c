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

#include "melsep/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "melsep/error.hpp"

namespace melsep {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Walks one JSON object, rejecting unknown keys and reporting type errors
// with the dotted field path.
class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + " must be an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    for (const auto& [key, _] : obj_.items()) {
      bool known = false;
      for (const char* k : keys) known = known || key == k;
      if (!known) throw ConfigError(field(key) + ": unknown field");
    }
  }

  bool has(const char* key) const { return obj_.contains(key); }

  Reader child(const char* key) const { return Reader(obj_.at(key), field(key)); }

  template <typename T>
  void get(const char* key, T& out) const {
    if (!obj_.contains(key)) return;
    const json& v = obj_.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(field(key) + ": expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned()) {
          throw ConfigError(field(key) + ": must be non-negative");
        }
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
    }
    out = v.get<T>();
  }

  void get_vector(const char* key, std::vector<double>& out) const {
    if (!obj_.contains(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_array()) throw ConfigError(field(key) + ": expected an array");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        throw ConfigError(field(key) + "[" + std::to_string(i) + "]: expected a number");
      }
      out.push_back(v[i].get<double>());
    }
  }

 private:
  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& obj_;
  std::string path_;
};

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw ConfigError(field + ": " + why);
}

}  // namespace

bool operator==(const PipelineConfig& a, const PipelineConfig& b) {
  return a.sample_rate_hz == b.sample_rate_hz && a.extraction == b.extraction &&
         a.anc == b.anc && a.kmeans == b.kmeans &&
         a.cluster_seed == b.cluster_seed &&
         a.threshold_single == b.threshold_single &&
         a.threshold_dual == b.threshold_dual && a.corpus == b.corpus;
}

void PipelineConfig::validate() const {
  if (sample_rate_hz <= 0) bad("sample_rate_hz", "must be positive");
  try {
    extraction.validate(sample_rate_hz);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  if (anc.lms.order < 0) bad("anc.order", "must be >= 0");
  if (!(anc.lms.step > 0.0) || !std::isfinite(anc.lms.step)) {
    bad("anc.step", "must be a positive finite number");
  }
  if (!anc.lms.initial_weights.empty() &&
      anc.lms.initial_weights.size() != static_cast<std::size_t>(anc.lms.order) + 1) {
    bad("anc.initial_weights", "must be empty or have order + 1 entries");
  }
  if (kmeans.k == 0) bad("kmeans.k", "must be >= 1");
  if (kmeans.max_iter == 0) bad("kmeans.max_iter", "must be >= 1");
  if (!(kmeans.tol >= 0.0)) bad("kmeans.tol", "must be >= 0");
  if (!std::isfinite(threshold_single) || threshold_single < 0.0) {
    bad("threshold.single", "must be a finite non-negative number");
  }
  if (!std::isfinite(threshold_dual) || threshold_dual < 0.0) {
    bad("threshold.dual", "must be a finite non-negative number");
  }
  if (corpus.profiles <= 0) bad("corpus.profiles", "must be >= 1");
  if (corpus.words <= 0) bad("corpus.words", "must be >= 1");
  if (!(corpus.duration_s > 0.0)) bad("corpus.duration_s", "must be > 0");
  const double samples = corpus.duration_s * sample_rate_hz;
  if (samples < static_cast<double>(extraction.frame_len) ||
      samples <= static_cast<double>(extraction.fir_taps)) {
    bad("corpus.duration_s", "too short for one analysis frame");
  }
  if (corpus.sample_rate_hz != sample_rate_hz) {
    bad("corpus.sample_rate_hz", "must equal sample_rate_hz");
  }
}

PipelineConfig default_pipeline_config() {
  PipelineConfig c;
  // Clean-split calibration of the default synthetic corpus at master seed 1,
  // rounded. The bench recalibrates per run and does not read these.
  c.threshold_single = 7.73;
  c.threshold_dual = 4.90;
  return c;
}

PipelineConfig parse_config(const std::string& json_text,
                            const PipelineConfig& base) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  PipelineConfig c = base;
  const Reader root(doc, "");
  root.allow({"sample_rate_hz", "extraction", "anc", "kmeans", "cluster_seed",
              "threshold", "corpus"});
  root.get("sample_rate_hz", c.sample_rate_hz);
  root.get("cluster_seed", c.cluster_seed);
  if (root.has("extraction")) {
    const Reader r = root.child("extraction");
    r.allow({"frame_len", "frame_shift", "fft_size", "num_coeffs", "band_lo_hz",
             "band_hi_hz", "single_filters", "split_hz", "ch1_filters",
             "ch2_filters", "fir_taps"});
    auto& e = c.extraction;
    r.get("frame_len", e.frame_len);
    r.get("frame_shift", e.frame_shift);
    r.get("fft_size", e.fft_size);
    r.get("num_coeffs", e.num_coeffs);
    r.get("band_lo_hz", e.band_lo_hz);
    r.get("band_hi_hz", e.band_hi_hz);
    r.get("single_filters", e.single_filters);
    r.get("split_hz", e.split_hz);
    r.get("ch1_filters", e.ch1_filters);
    r.get("ch2_filters", e.ch2_filters);
    r.get("fir_taps", e.fir_taps);
  }
  if (root.has("anc")) {
    const Reader r = root.child("anc");
    r.allow({"order", "step", "normalize_step", "initial_weights"});
    r.get("order", c.anc.lms.order);
    r.get("step", c.anc.lms.step);
    r.get("normalize_step", c.anc.normalize_step);
    r.get_vector("initial_weights", c.anc.lms.initial_weights);
  }
  if (root.has("kmeans")) {
    const Reader r = root.child("kmeans");
    r.allow({"k", "max_iter", "tol"});
    r.get("k", c.kmeans.k);
    r.get("max_iter", c.kmeans.max_iter);
    r.get("tol", c.kmeans.tol);
  }
  if (root.has("threshold")) {
    const Reader r = root.child("threshold");
    r.allow({"single", "dual"});
    r.get("single", c.threshold_single);
    r.get("dual", c.threshold_dual);
  }
  if (root.has("corpus")) {
    const Reader r = root.child("corpus");
    r.allow({"profiles", "words", "duration_s", "seed"});
    r.get("profiles", c.corpus.profiles);
    r.get("words", c.corpus.words);
    r.get("duration_s", c.corpus.duration_s);
    r.get("seed", c.corpus.seed);
  }
  c.corpus.sample_rate_hz = c.sample_rate_hz;
  c.validate();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string config_json(const PipelineConfig& c) {
  const auto& e = c.extraction;
  ordered_json doc;
  doc["sample_rate_hz"] = c.sample_rate_hz;
  doc["extraction"] = {{"frame_len", e.frame_len},
                       {"frame_shift", e.frame_shift},
                       {"fft_size", e.fft_size},
                       {"num_coeffs", e.num_coeffs},
                       {"band_lo_hz", e.band_lo_hz},
                       {"band_hi_hz", e.band_hi_hz},
                       {"single_filters", e.single_filters},
                       {"split_hz", e.split_hz},
                       {"ch1_filters", e.ch1_filters},
                       {"ch2_filters", e.ch2_filters},
                       {"fir_taps", e.fir_taps}};
  doc["anc"] = {{"order", c.anc.lms.order},
                {"step", c.anc.lms.step},
                {"normalize_step", c.anc.normalize_step},
                {"initial_weights", c.anc.lms.initial_weights}};
  doc["kmeans"] = {{"k", c.kmeans.k},
                   {"max_iter", c.kmeans.max_iter},
                   {"tol", c.kmeans.tol}};
  doc["cluster_seed"] = c.cluster_seed;
  doc["threshold"] = {{"single", c.threshold_single}, {"dual", c.threshold_dual}};
  doc["corpus"] = {{"profiles", c.corpus.profiles},
                   {"words", c.corpus.words},
                   {"duration_s", c.corpus.duration_s},
                   {"seed", c.corpus.seed}};
  return doc.dump(2) + "\n";
}

void save_config(const PipelineConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << config_json(config);
  if (!out) throw IoError("write failed for " + path.string());
}

double effective_step(const AncOptions& options, const AudioBuffer& primary) {
  if (!options.normalize_step) return options.lms.step;
  const double power = mean_power(primary.samples);
  return power > 0.0 ? options.lms.step / power : options.lms.step;
}

AncResult run_anc(const AudioBuffer& primary, const AudioBuffer& reference,
                  const AncOptions& options) {
  LmsConfig cfg = options.lms;
  cfg.step = effective_step(options, primary);
  return run_anc(primary, reference, cfg);
}

}  // namespace melsep
