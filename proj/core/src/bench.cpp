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

#include "melsep/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "melsep/error.hpp"
#include "melsep/hash.hpp"

namespace melsep {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(Method m) { return m == Method::kSingle ? "single" : "dual"; }

Method method_from_string(const std::string& name) {
  if (name == "single") return Method::kSingle;
  if (name == "dual") return Method::kDual;
  throw ParameterError("unknown method '" + name + "' (expected single or dual)");
}

std::string SnrPoint::label() const {
  if (clean) return "clean";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", db);
  return buf;
}

bool SweepReport::has_errors() const {
  return std::ranges::any_of(cells, [](const SweepCell& c) { return c.error.has_value(); });
}

// ---------------------------------------------------------------------------
// Plan I/O

void ExperimentPlan::validate() const {
  if (trials == 0) throw ConfigError("plan.trials: must be > 0");
  if (snr_points.empty()) throw ConfigError("plan.snr_points_db: must not be empty");
  if (methods.empty()) throw ConfigError("plan.methods: must not be empty");
  if (anc.empty()) throw ConfigError("plan.anc: must not be empty");
  std::set<double> seen;
  for (const auto& p : snr_points) {
    if (!std::isfinite(p.effective_db())) {
      throw ConfigError("plan.snr_points_db: values must be finite");
    }
    if (!seen.insert(p.effective_db()).second) {
      throw ConfigError("plan.snr_points_db: duplicate point " + p.label());
    }
  }
  if (std::set<Method>(methods.begin(), methods.end()).size() != methods.size()) {
    throw ConfigError("plan.methods: duplicate method");
  }
  if (std::set<bool>(anc.begin(), anc.end()).size() != anc.size()) {
    throw ConfigError("plan.anc: duplicate setting");
  }
}

ExperimentPlan parse_plan(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("plan: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("plan: must be a JSON object");
  static const std::set<std::string> known = {"snr_points_db", "methods", "anc", "corpus",
                                              "trials", "master_seed", "threads"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) throw ConfigError("plan." + key + ": unknown field");
  }

  ExperimentPlan plan;
  const auto array = [&](const char* key) -> const json& {
    const json& v = doc.at(key);
    if (!v.is_array()) throw ConfigError(std::string("plan.") + key + ": expected an array");
    return v;
  };
  const auto elem = [](const char* key, std::size_t i) {
    return std::string("plan.") + key + "[" + std::to_string(i) + "]";
  };

  if (doc.contains("snr_points_db")) {
    const json& arr = array("snr_points_db");
    plan.snr_points.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (arr[i].is_string() && arr[i].get<std::string>() == "clean") {
        plan.snr_points.push_back(SnrPoint::Clean());
      } else if (arr[i].is_number()) {
        plan.snr_points.push_back(SnrPoint::Db(arr[i].get<double>()));
      } else {
        throw ConfigError(elem("snr_points_db", i) + ": expected a number or \"clean\"");
      }
    }
  }
  if (doc.contains("methods")) {
    const json& arr = array("methods");
    plan.methods.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string()) throw ConfigError(elem("methods", i) + ": expected a string");
      try {
        plan.methods.push_back(method_from_string(arr[i].get<std::string>()));
      } catch (const ParameterError& e) {
        throw ConfigError(elem("methods", i) + ": " + e.what());
      }
    }
  }
  if (doc.contains("anc")) {
    const json& arr = array("anc");
    plan.anc.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const json& v = arr[i];
      if (v.is_boolean()) {
        plan.anc.push_back(v.get<bool>());
      } else if (v.is_string() && (v == "on" || v == "off")) {
        plan.anc.push_back(v == "on");
      } else {
        throw ConfigError(elem("anc", i) + ": expected \"on\" or \"off\"");
      }
    }
  }
  if (doc.contains("corpus")) {
    if (!doc["corpus"].is_string()) throw ConfigError("plan.corpus: expected a string");
    plan.corpus = doc["corpus"].get<std::string>();
  }
  const auto unsigned_field = [&](const char* key, auto& out) {
    if (!doc.contains(key)) return;
    const json& v = doc.at(key);
    if (!v.is_number_unsigned()) {
      throw ConfigError(std::string("plan.") + key + ": expected a non-negative integer");
    }
    out = v.get<std::remove_reference_t<decltype(out)>>();
  };
  unsigned_field("trials", plan.trials);
  unsigned_field("master_seed", plan.master_seed);
  unsigned_field("threads", plan.threads);
  plan.validate();
  return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open plan " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_plan(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

namespace {

ordered_json plan_to_json(const ExperimentPlan& plan) {
  ordered_json snr = ordered_json::array();
  for (const auto& p : plan.snr_points) {
    if (p.clean) {
      snr.push_back("clean");
    } else {
      snr.push_back(p.db);
    }
  }
  ordered_json methods = ordered_json::array();
  for (Method m : plan.methods) methods.push_back(to_string(m));
  ordered_json anc = ordered_json::array();
  for (bool a : plan.anc) anc.push_back(a ? "on" : "off");
  ordered_json doc;
  doc["snr_points_db"] = snr;
  doc["methods"] = methods;
  doc["anc"] = anc;
  doc["corpus"] = plan.corpus;
  doc["trials"] = plan.trials;
  doc["master_seed"] = plan.master_seed;
  doc["threads"] = plan.threads;
  return doc;
}

// ---------------------------------------------------------------------------
// Sweep internals

struct Trial {
  std::size_t test = 0;  // index into Protocol::tests
  std::size_t ref = 0;   // index into the corpus
  bool genuine = false;
};

struct TestUtterance {
  std::string id;
  AudioBuffer audio;
  std::uint64_t noise_seed = 0;
};

struct Split {
  std::vector<TestUtterance> tests;  // one per reference in `refs`
  std::vector<std::size_t> refs;     // corpus indices
  std::vector<Trial> genuine;
  std::vector<Trial> impostor;
};

std::vector<FeatureMatrix> extract(Method method, const AudioBuffer& audio,
                                   const ExtractionConfig& cfg,
                                   const std::string& id) {
  if (method == Method::kSingle) return {extract_single_channel(audio, cfg, id)};
  auto dual = extract_dual_channel(audio, cfg, id);
  return {std::move(dual.ch1), std::move(dual.ch2)};
}

// Fresh replicate of each reference plus genuine/impostor pairings.
Split make_split(const Corpus& corpus, const std::vector<std::size_t>& refs,
                 std::uint64_t master_seed, const std::string& tag) {
  Split split;
  split.refs = refs;
  for (std::size_t r : refs) {
    const auto& e = corpus[r].entry;
    const std::string id = utterance_id(e.profile_id, e.word_id);
    TestUtterance t;
    t.id = id + "#test";
    t.audio = synth_speaker(e.profile_id, e.word_id, corpus[r].audio.duration_s(),
                            mix_seed(master_seed, fnv1a64("test/" + id)),
                            corpus[r].audio.sample_rate_hz);
    t.noise_seed = mix_seed(master_seed, fnv1a64("noise/" + id));
    split.tests.push_back(std::move(t));
  }

  std::mt19937_64 rng(mix_seed(master_seed, fnv1a64("pairs/" + tag)));
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const auto& ref = corpus[refs[i]].entry;
    split.genuine.push_back({i, refs[i], true});
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < refs.size(); ++j) {
      const auto& cand = corpus[refs[j]].entry;
      if (cand.word_id == ref.word_id && cand.profile_id != ref.profile_id) {
        others.push_back(j);
      }
    }
    if (others.empty()) {
      throw ConfigError("corpus: no impostor available for " +
                        utterance_id(ref.profile_id, ref.word_id) +
                        " (need >= 2 profiles per word)");
    }
    std::uniform_int_distribution<std::size_t> pick(0, others.size() - 1);
    split.impostor.push_back({others[pick(rng)], refs[i], false});
  }
  return split;
}

}  // namespace

std::string plan_json(const ExperimentPlan& plan) { return plan_to_json(plan).dump(2) + "\n"; }

SweepReport run_sweep(const ExperimentPlan& plan, const Corpus& corpus,
                      const PipelineConfig& config) {
  plan.validate();
  config.validate();
  if (corpus.empty()) throw ConfigError("corpus: no utterances");
  for (const auto& u : corpus) {
    if (u.audio.sample_rate_hz != config.sample_rate_hz) {
      throw ConfigError("corpus: " + u.entry.path.string() + " is " +
                        std::to_string(u.audio.sample_rate_hz) +
                        " Hz, config expects " + std::to_string(config.sample_rate_hz));
    }
  }

  // Calibration split = first half of the distinct word ids.
  std::vector<int> words;
  for (const auto& u : corpus) words.push_back(u.entry.word_id);
  std::ranges::sort(words);
  words.erase(std::unique(words.begin(), words.end()), words.end());
  if (words.size() < 2) {
    throw ConfigError("corpus: need >= 2 distinct word ids for a calibration split");
  }
  const std::set<int> calib_words(words.begin(),
                                  words.begin() + static_cast<std::ptrdiff_t>(words.size() / 2));
  std::vector<std::size_t> calib_refs, eval_refs;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (calib_words.contains(corpus[i].entry.word_id) ? calib_refs : eval_refs).push_back(i);
  }

  const Split calib = make_split(corpus, calib_refs, plan.master_seed, "calibration");
  const Split eval = make_split(corpus, eval_refs, plan.master_seed, "evaluation");

  const std::size_t want_genuine = plan.trials / 2;
  const std::size_t want_impostor = plan.trials - want_genuine;
  if (want_genuine > eval.genuine.size() || want_impostor > eval.impostor.size()) {
    throw ConfigError("plan.trials: " + std::to_string(plan.trials) +
                      " trials need " + std::to_string(want_genuine) + " genuine and " +
                      std::to_string(want_impostor) + " impostor pairs, corpus offers " +
                      std::to_string(eval.genuine.size()) + " of each");
  }
  std::vector<Trial> trials;
  {
    std::mt19937_64 rng(mix_seed(plan.master_seed, fnv1a64("trials")));
    auto g = eval.genuine;
    auto im = eval.impostor;
    std::shuffle(g.begin(), g.end(), rng);
    std::shuffle(im.begin(), im.end(), rng);
    trials.assign(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(want_genuine));
    trials.insert(trials.end(), im.begin(), im.begin() + static_cast<std::ptrdiff_t>(want_impostor));
  }
  std::vector<bool> test_used(eval.tests.size(), false);
  for (const auto& t : trials) test_used[t.test] = true;

  const std::uint64_t cluster_seed = mix_seed(plan.master_seed, config.cluster_seed);
  const auto& xcfg = config.extraction;

  SweepReport report;
  report.plan = plan;
  report.config = config;
  report.corpus_digest = corpus_digest(corpus);

  std::vector<Method> methods = plan.methods;
  std::ranges::sort(methods);

  // Enrolled reference models (clean) and per-method clean-split thresholds.
  std::map<Method, std::vector<UtteranceModel>> ref_models;
  for (Method m : methods) {
    auto& models = ref_models[m];
    models.resize(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto& e = corpus[i].entry;
      models[i] = fit_utterance(
          extract(m, corpus[i].audio, xcfg, utterance_id(e.profile_id, e.word_id)),
          config.kmeans, cluster_seed);
    }
    std::vector<UtteranceModel> calib_tests;
    for (const auto& t : calib.tests) {
      calib_tests.push_back(
          fit_utterance(extract(m, t.audio, xcfg, t.id), config.kmeans, cluster_seed));
    }
    std::vector<double> genuine, impostor;
    for (const auto& t : calib.genuine) {
      genuine.push_back(compare_models(calib_tests[t.test], models[t.ref], 0.0).score);
    }
    for (const auto& t : calib.impostor) {
      impostor.push_back(compare_models(calib_tests[t.test], models[t.ref], 0.0).score);
    }
    report.thresholds[m] = calibrate_threshold_detailed(genuine, impostor);
  }

  std::vector<bool> anc_settings = plan.anc;
  std::sort(anc_settings.begin(), anc_settings.end());
  std::vector<SnrPoint> snrs = plan.snr_points;
  std::ranges::sort(snrs, [](const SnrPoint& a, const SnrPoint& b) {
    return a.effective_db() > b.effective_db();
  });
  for (Method m : methods) {
    for (bool anc : anc_settings) {
      for (const auto& snr : snrs) {
        SweepCell cell;
        cell.method = m;
        cell.anc = anc;
        cell.snr = snr;
        report.cells.push_back(cell);
      }
    }
  }

  const auto run_cell = [&](SweepCell& cell) {
    const auto start = std::chrono::steady_clock::now();
    try {
      std::vector<UtteranceModel> test_models(eval.tests.size());
      for (std::size_t i = 0; i < eval.tests.size(); ++i) {
        if (!test_used[i]) continue;
        const auto& t = eval.tests[i];
        NoiseSpec noise;
        noise.target_snr_db = cell.snr.effective_db();
        noise.seed = t.noise_seed;
        auto mixed = mix_at_snr(t.audio, noise);
        AudioBuffer input = cell.anc
                                ? run_anc(mixed.noisy, mixed.noise_only, config.anc).error_signal
                                : std::move(mixed.noisy);
        test_models[i] = fit_utterance(extract(cell.method, input, xcfg, t.id),
                                       config.kmeans, cluster_seed);
      }
      const double threshold = report.thresholds.at(cell.method).threshold;
      const auto& refs = ref_models.at(cell.method);
      for (const auto& t : trials) {
        cell.counts.add(t.genuine,
                        compare_models(test_models[t.test], refs[t.ref], threshold).decision);
      }
      cell.accuracy = accuracy(cell.counts);
    } catch (const Error& e) {
      cell.counts = {};
      cell.accuracy = std::nan("");
      cell.error = e.what();
    }
    cell.wall_time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  };

  unsigned workers = plan.threads != 0 ? plan.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(report.cells.size()));
  if (workers == 1) {
    for (auto& cell : report.cells) run_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < report.cells.size(); i = next++) {
          run_cell(report.cells[i]);
        }
      });
    }
  }
  return report;
}

std::string report_json(const SweepReport& report, bool include_timing) {
  ordered_json doc;
  doc["plan"] = plan_to_json(report.plan);
  doc["config"] = ordered_json::parse(config_json(report.config));
  doc["corpus_digest"] = report.corpus_digest;
  ordered_json thresholds = ordered_json::object();
  for (const auto& [m, cal] : report.thresholds) {
    thresholds[to_string(m)] = {{"threshold", cal.threshold},
                                {"calibration_errors", cal.errors}};
  }
  doc["thresholds"] = thresholds;
  ordered_json cells = ordered_json::array();
  for (const auto& c : report.cells) {
    ordered_json cell;
    cell["method"] = to_string(c.method);
    cell["anc"] = c.anc ? "on" : "off";
    cell["snr_db"] = c.snr.label();
    if (c.error) {
      cell["error"] = *c.error;
    } else {
      cell["tp"] = c.counts.tp;
      cell["tn"] = c.counts.tn;
      cell["fp"] = c.counts.fp;
      cell["fn"] = c.counts.fn;
      cell["accuracy"] = c.accuracy;
    }
    if (include_timing) cell["wall_time_ms"] = c.wall_time_ms;
    cells.push_back(cell);
  }
  doc["cells"] = cells;
  return doc.dump(2) + "\n";
}

std::string curves_csv(const SweepReport& report) {
  std::string out = "method,anc,snr_db,tp,tn,fp,fn,accuracy\n";
  char line[160];
  for (const auto& c : report.cells) {
    if (c.error) {
      std::snprintf(line, sizeof line, "%s,%s,%s,,,,,\n", to_string(c.method).c_str(),
                    c.anc ? "on" : "off", c.snr.label().c_str());
    } else {
      std::snprintf(line, sizeof line, "%s,%s,%s,%zu,%zu,%zu,%zu,%.17g\n",
                    to_string(c.method).c_str(), c.anc ? "on" : "off",
                    c.snr.label().c_str(), c.counts.tp, c.counts.tn, c.counts.fp,
                    c.counts.fn, c.accuracy);
    }
    out += line;
  }
  return out;
}

void emit_curves(const SweepReport& report, const std::filesystem::path& path) {
  if (report.cells.empty()) throw ParameterError("emit_curves: report has no cells");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << curves_csv(report);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace melsep
