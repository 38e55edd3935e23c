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

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "melsep/anc.hpp"
#include "melsep/audio.hpp"
#include "melsep/bench.hpp"
#include "melsep/config.hpp"
#include "melsep/corpus.hpp"
#include "melsep/error.hpp"
#include "melsep/features_io.hpp"
#include "melsep/fir.hpp"
#include "melsep/mfcc.hpp"
#include "melsep/wav.hpp"

namespace melsep::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Argument combinations CLI11 cannot express; mapped to kExitUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config file (if any) overlaid with whatever flags the user actually typed.
// `overrides` lists the dotted config fields set on the command line, so the
// JSON echo shows where each non-default value came from.
struct Settings {
  PipelineConfig config = default_pipeline_config();
  std::string config_source = "default";
  std::vector<std::string> overrides;

  template <typename T>
  void apply(const CLI::Option* opt, const T& value, T& field, const char* name) {
    if (opt->count() == 0) return;
    field = value;
    overrides.emplace_back(name);
  }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

ordered_json settings_json(const Settings& s) {
  ordered_json j;
  j["source"] = s.config_source;
  j["overrides"] = s.overrides;
  j["effective"] = ordered_json::parse(config_json(s.config));
  return j;
}

// Feature files for `in` land in `dir` as <stem>.csv / <stem>.json, or with a
// .ch1 / .ch2 infix for the dual method.
ordered_json write_features(const FeatureMatrix& f, const MelFilterbank& bank,
                            const ExtractionConfig& cfg, const fs::path& dir,
                            const std::string& stem, const std::string& infix) {
  const fs::path csv = dir / (stem + infix + ".csv");
  const fs::path json = dir / (stem + infix + ".json");
  write_features_csv(f, csv);
  write_sidecar_json(make_sidecar(f, bank, cfg), json);
  return {{"channel", to_string(f.channel)},
          {"frames", f.rows.rows()},
          {"csv", csv.string()},
          {"sidecar", json.string()}};
}

AudioBuffer apply_anc_if(bool enabled, const AudioBuffer& primary,
                         const std::string& reference, const AncOptions& anc) {
  if (!enabled) return primary;
  return run_anc(primary, read_wav(reference), anc).error_signal;
}

std::vector<FeatureMatrix> features_for(Method method, const AudioBuffer& audio,
                                        const ExtractionConfig& cfg,
                                        const std::string& id) {
  if (method == Method::kSingle) return {extract_single_channel(audio, cfg, id)};
  auto dual = extract_dual_channel(audio, cfg, id);
  return {std::move(dual.ch1), std::move(dual.ch2)};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"melsep: noise-robust speaker comparison with dual-channel MFCC"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "melsep 0.1.0");

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON pipeline config (flags override it, it overrides defaults)");

  // synth
  auto* synth = app.add_subcommand("synth", "Write the synthetic corpus (WAVs + manifest.json)");
  std::string synth_out;
  int profiles = 0, words = 0;
  double duration = 0.0;
  std::uint64_t corpus_seed = 0;
  synth->add_option("--out", synth_out, "Output directory")->required();
  auto* o_profiles = synth->add_option("--profiles", profiles, "Speaker profiles");
  auto* o_words = synth->add_option("--words", words, "Words per profile");
  auto* o_duration = synth->add_option("--duration", duration, "Utterance length in seconds");
  auto* o_cseed = synth->add_option("--seed", corpus_seed, "Corpus seed");

  // mix
  auto* mix = app.add_subcommand("mix", "Add noise to a clean WAV at a target SNR");
  std::string mix_in, mix_out, mix_noise_out, mix_recorded;
  double mix_snr = 0.0;
  std::uint64_t mix_seed_value = 1;
  mix->add_option("--in", mix_in, "Clean WAV")->required();
  mix->add_option("--snr", mix_snr, "Target SNR in dB")->required();
  mix->add_option("--seed", mix_seed_value, "Noise seed (recorded noise: start offset)");
  mix->add_option("--noise", mix_recorded, "Recorded noise WAV, looped (default: white Gaussian)");
  mix->add_option("--out", mix_out, "Noisy WAV")->required();
  mix->add_option("--noise-out", mix_noise_out, "Write the scaled noise (ANC reference) here");

  // anc
  auto* anc = app.add_subcommand("anc", "LMS adaptive noise cancelling");
  std::string anc_primary, anc_reference, anc_out, anc_mse;
  int anc_order = 0;
  double anc_mu = 0.0;
  bool anc_normalize = true;
  anc->add_option("--primary", anc_primary, "Noisy WAV (desired input)")->required();
  anc->add_option("--reference", anc_reference, "Noise reference WAV")->required();
  auto* o_taps = anc->add_option("--taps", anc_order, "Filter order L (L+1 weights)");
  auto* o_mu = anc->add_option("--mu", anc_mu, "Step size");
  auto* o_norm = anc->add_flag("--normalize,!--no-normalize", anc_normalize,
                               "Divide the step by the primary power");
  anc->add_option("--out", anc_out, "Denoised WAV")->required();
  anc->add_option("--mse-csv", anc_mse, "MSE trace CSV (window_index,mse)");

  // filter
  auto* filter = app.add_subcommand("filter", "Zero-phase windowed-sinc FIR filtering");
  std::string filter_kind, filter_in, filter_out, filter_kernel;
  double filter_lo = 0.0, filter_hi = 0.0;
  int filter_taps = kDefaultFirTaps;
  filter->add_option("--kind", filter_kind, "lp (uses --hi), hp (uses --lo) or bp")
      ->required()
      ->check(CLI::IsMember({"lp", "hp", "bp"}));
  auto* o_lo = filter->add_option("--lo", filter_lo, "Lower edge in Hz");
  auto* o_hi = filter->add_option("--hi", filter_hi, "Upper edge in Hz");
  filter->add_option("--taps", filter_taps, "Odd tap count");
  filter->add_option("--in", filter_in, "Input WAV")->required();
  filter->add_option("--out", filter_out, "Output WAV")->required();
  filter->add_option("--kernel-csv", filter_kernel, "Also write the taps (index,coefficient)");

  // extract
  auto* extract = app.add_subcommand("extract", "MFCC features to CSV");
  std::string ex_method, ex_in, ex_out;
  extract->add_option("--method", ex_method, "single or dual")
      ->required()
      ->check(CLI::IsMember({"single", "dual"}));
  extract->add_option("--in", ex_in, "Input WAV")->required();
  extract->add_option("--out", ex_out, "Output directory")->required();

  // verdict
  auto* verdict_cmd = app.add_subcommand("verdict", "Decide whether two recordings share a speaker");
  std::string v_test, v_ref, v_method, v_reference, v_out;
  bool v_anc = false;
  double v_threshold = 0.0;
  verdict_cmd->add_option("--test", v_test, "Questioned WAV")->required();
  verdict_cmd->add_option("--ref", v_ref, "Comparison WAV")->required();
  verdict_cmd->add_option("--method", v_method, "single or dual")
      ->required()
      ->check(CLI::IsMember({"single", "dual"}));
  verdict_cmd->add_flag("--anc", v_anc, "Run ANC on the test recording first");
  verdict_cmd->add_option("--reference", v_reference, "Noise reference WAV for --anc");
  auto* o_thr = verdict_cmd->add_option("--threshold", v_threshold, "Decision threshold");
  verdict_cmd->add_option("--out", v_out, "Also write the verdict JSON here");

  // bench run
  auto* bench = app.add_subcommand("bench", "Benchmark sweeps");
  bench->require_subcommand(1);
  auto* bench_run = bench->add_subcommand("run", "Run an SNR x method x ANC sweep");
  std::string b_plan, b_corpus, b_out, b_curves;
  unsigned b_threads = 0;
  bool b_timing = false;
  bench_run->add_option("--plan", b_plan, "Plan JSON (default: built-in plan)");
  bench_run->add_option("--corpus", b_corpus, "Corpus manifest (default: plan.corpus or synthesize)");
  bench_run->add_option("--out", b_out, "Report JSON")->required();
  bench_run->add_option("--curves", b_curves, "Curves CSV");
  auto* o_threads = bench_run->add_option("--threads", b_threads, "Worker threads (0 = all cores)");
  bench_run->add_flag("--timing", b_timing, "Include wall times in the report");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("melsep");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Settings s;
    if (!config_path.empty()) {
      s.config = load_config(config_path);
      s.config_source = config_path;
    }

    if (synth->parsed()) {
      CorpusSpec& c = s.config.corpus;
      s.apply(o_profiles, profiles, c.profiles, "corpus.profiles");
      s.apply(o_words, words, c.words, "corpus.words");
      s.apply(o_duration, duration, c.duration_s, "corpus.duration_s");
      s.apply(o_cseed, corpus_seed, c.seed, "corpus.seed");
      if (c.profiles <= 0) throw UsageError("--profiles must be >= 1");
      if (c.words <= 0) throw UsageError("--words must be >= 1");
      if (!(c.duration_s > 0.0)) throw UsageError("--duration must be > 0");
      const Corpus corpus = synthesize_corpus(c);
      const fs::path manifest = write_corpus(corpus, synth_out);
      ordered_json j;
      j["manifest"] = manifest.string();
      j["utterances"] = corpus.size();
      j["digest"] = corpus_digest(corpus);
      j["config"] = settings_json(s);
      out << j.dump(2) << "\n";
      return kExitOk;
    }

    if (mix->parsed()) {
      const AudioBuffer clean = read_wav(mix_in);
      NoiseSpec spec;
      spec.target_snr_db = mix_snr;
      spec.seed = mix_seed_value;
      if (!mix_recorded.empty()) {
        spec.kind = NoiseKind::kRecorded;
        spec.recorded = read_wav(mix_recorded).samples;
      }
      const MixResult m = mix_at_snr(clean, spec);
      const auto stats = write_wav(m.noisy, mix_out);
      if (!mix_noise_out.empty()) write_wav(m.noise_only, mix_noise_out);
      ordered_json j;
      j["target_snr_db"] = mix_snr;
      j["measured_snr_db"] = measure_snr_db(clean, m.noisy);
      j["clipped"] = stats.clipped;
      out << j.dump(2) << "\n";
      if (stats.clipped > 0) {
        err << "warning: " << stats.clipped << " samples clipped in " << mix_out << "\n";
      }
      return kExitOk;
    }

    if (anc->parsed()) {
      AncOptions& a = s.config.anc;
      s.apply(o_taps, anc_order, a.lms.order, "anc.order");
      s.apply(o_mu, anc_mu, a.lms.step, "anc.step");
      s.apply(o_norm, anc_normalize, a.normalize_step, "anc.normalize_step");
      if (a.lms.order < 0) throw UsageError("--taps must be >= 0");
      if (!(a.lms.step > 0.0)) throw UsageError("--mu must be > 0");
      if (!a.lms.initial_weights.empty() &&
          a.lms.initial_weights.size() != static_cast<std::size_t>(a.lms.order) + 1) {
        a.lms.initial_weights.clear();
      }
      const AudioBuffer primary = read_wav(anc_primary);
      const AudioBuffer reference = read_wav(anc_reference);
      const AncResult r = run_anc(primary, reference, a);
      const auto stats = write_wav(r.error_signal, anc_out);
      if (!anc_mse.empty()) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "window_index,mse\n";
        for (std::size_t i = 0; i < r.mse_trace.size(); ++i) {
          csv << i << "," << r.mse_trace[i] << "\n";
        }
        write_text(anc_mse, csv.str());
      }
      ordered_json j;
      j["effective_step"] = effective_step(a, primary);
      j["windows"] = r.mse_trace.size();
      j["clipped"] = stats.clipped;
      j["config"] = settings_json(s);
      out << j.dump(2) << "\n";
      return kExitOk;
    }

    if (filter->parsed()) {
      const bool need_lo = filter_kind != "lp";
      const bool need_hi = filter_kind != "hp";
      if ((need_lo && o_lo->count() == 0) || (need_hi && o_hi->count() == 0)) {
        throw UsageError("--kind " + filter_kind + " needs " +
                         (need_lo && need_hi ? "--lo and --hi" : need_lo ? "--lo" : "--hi"));
      }
      const AudioBuffer in = read_wav(filter_in);
      FilterKernel kernel;
      if (filter_kind == "lp") {
        kernel = design_lowpass(filter_hi, filter_taps, in.sample_rate_hz);
      } else if (filter_kind == "hp") {
        kernel = design_highpass(filter_lo, filter_taps, in.sample_rate_hz);
      } else {
        kernel = design_bandpass(filter_lo, filter_hi, filter_taps, in.sample_rate_hz);
      }
      const auto stats = write_wav(filter_zero_phase(in, kernel), filter_out);
      if (!filter_kernel.empty()) write_kernel_csv(kernel, filter_kernel);
      ordered_json j;
      j["kind"] = to_string(kernel.kind);
      j["taps"] = kernel.taps.size();
      j["clipped"] = stats.clipped;
      out << j.dump(2) << "\n";
      return kExitOk;
    }

    if (extract->parsed()) {
      const ExtractionConfig& cfg = s.config.extraction;
      const AudioBuffer in = read_wav(ex_in);
      cfg.validate(in.sample_rate_hz);
      fs::create_directories(ex_out);
      const std::string stem = fs::path(ex_in).stem().string();
      ordered_json files = ordered_json::array();
      if (ex_method == "single") {
        const auto bank = build_filterbank(cfg.band_lo_hz, cfg.band_hi_hz, cfg.single_filters,
                                           cfg.fft_size, in.sample_rate_hz, ChannelId::kSingle);
        files.push_back(write_features(extract_with_bank(in, bank, cfg, stem), bank, cfg,
                                       ex_out, stem, ""));
      } else {
        const auto bank1 = build_filterbank(cfg.band_lo_hz, cfg.split_hz, cfg.ch1_filters,
                                            cfg.fft_size, in.sample_rate_hz, ChannelId::kCh1);
        const auto bank2 = build_filterbank(cfg.split_hz, cfg.band_hi_hz, cfg.ch2_filters,
                                            cfg.fft_size, in.sample_rate_hz, ChannelId::kCh2);
        const DualFeatures dual = extract_dual_channel(in, cfg, stem);
        files.push_back(write_features(dual.ch1, bank1, cfg, ex_out, stem, ".ch1"));
        files.push_back(write_features(dual.ch2, bank2, cfg, ex_out, stem, ".ch2"));
      }
      ordered_json j;
      j["method"] = ex_method;
      j["files"] = files;
      j["config"] = settings_json(s);
      out << j.dump(2) << "\n";
      return kExitOk;
    }

    if (verdict_cmd->parsed()) {
      if (v_anc && v_reference.empty()) throw UsageError("--anc requires --reference");
      if (!v_anc && !v_reference.empty()) throw UsageError("--reference is only used with --anc");
      const Method method = method_from_string(v_method);
      double& field = method == Method::kSingle ? s.config.threshold_single
                                                : s.config.threshold_dual;
      s.apply(o_thr, v_threshold, field,
              method == Method::kSingle ? "threshold.single" : "threshold.dual");
      if (!(field >= 0.0)) throw UsageError("--threshold must be >= 0");

      const AudioBuffer test =
          apply_anc_if(v_anc, read_wav(v_test), v_reference, s.config.anc);
      const AudioBuffer ref = read_wav(v_ref);
      const auto& cfg = s.config.extraction;
      const auto tf = features_for(method, test, cfg, fs::path(v_test).stem().string());
      const auto rf = features_for(method, ref, cfg, fs::path(v_ref).stem().string());
      const IdentityVerdict v = verdict(tf, rf, s.config.kmeans, field, s.config.cluster_seed);

      ordered_json j = ordered_json::parse(verdict_json(v));
      j["method"] = v_method;
      j["anc"] = v_anc;
      j["config"] = settings_json(s);
      const std::string text = j.dump(2) + "\n";
      out << text;
      if (!v_out.empty()) write_text(v_out, text);
      return kExitOk;
    }

    if (bench_run->parsed()) {
      ExperimentPlan plan = b_plan.empty() ? ExperimentPlan{} : load_plan(b_plan);
      if (o_threads->count() > 0) plan.threads = b_threads;
      Corpus corpus;
      if (!b_corpus.empty()) {
        corpus = load_corpus(b_corpus);
      } else if (!plan.corpus.empty()) {
        fs::path p = plan.corpus;
        if (p.is_relative() && !b_plan.empty()) p = fs::path(b_plan).parent_path() / p;
        corpus = load_corpus(p);
      } else {
        corpus = synthesize_corpus(s.config.corpus);
      }
      const SweepReport report = run_sweep(plan, corpus, s.config);
      write_text(b_out, report_json(report, b_timing));
      if (!b_curves.empty()) emit_curves(report, b_curves);
      out << curves_csv(report);
      if (report.has_errors()) {
        err << "error: one or more cells failed; see " << b_out << "\n";
        return kExitRuntime;
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace melsep::cli
