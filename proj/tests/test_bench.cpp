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

#include <algorithm>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "melsep/bench.hpp"
#include "melsep/error.hpp"
#include "oracles.hpp"

using namespace melsep;

namespace {

Corpus small_corpus() {
  CorpusSpec spec;
  spec.profiles = 3;
  spec.words = 4;
  spec.duration_s = 0.5;
  return synthesize_corpus(spec);
}

ExperimentPlan small_plan() {
  ExperimentPlan plan;
  plan.snr_points = {SnrPoint::Clean(), SnrPoint::Db(0)};
  plan.methods = {Method::kDual, Method::kSingle};
  plan.anc = {true, false};
  plan.trials = 8;
  plan.threads = 2;
  return plan;
}

std::string plan_error(const std::string& text) {
  try {
    (void)parse_plan(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("plan parsing") {
  const ExperimentPlan p = parse_plan(
      R"({"snr_points_db": ["clean", 0, -6], "methods": ["dual"], "anc": ["off"], "trials": 10})");
  CHECK(p.snr_points == std::vector<SnrPoint>{SnrPoint::Clean(), SnrPoint::Db(0), SnrPoint::Db(-6)});
  CHECK(p.methods == std::vector<Method>{Method::kDual});
  CHECK(p.anc == std::vector<bool>{false});
  CHECK(p.trials == 10);
  CHECK(parse_plan("{}") == ExperimentPlan{});
  CHECK(parse_plan(plan_json(p)) == p);
}

TEST_CASE("malformed plans name the field") {
  CHECK(plan_error(R"({"snr_points_db": [0, "loud"]})").find("plan.snr_points_db[1]") != std::string::npos);
  CHECK(plan_error(R"({"methods": ["triple"]})").find("plan.methods[0]") != std::string::npos);
  CHECK(plan_error(R"({"anc": ["maybe"]})").find("plan.anc[0]") != std::string::npos);
  CHECK(plan_error(R"({"trials": -3})").find("plan.trials") != std::string::npos);
  CHECK(plan_error(R"({"trials": 0})").find("plan.trials") != std::string::npos);
  CHECK(plan_error(R"({"snr_points_db": [0, 0]})").find("duplicate") != std::string::npos);
  CHECK(plan_error(R"({"snr_points_db": []})").find("plan.snr_points_db") != std::string::npos);
  CHECK(plan_error(R"({"extra": 1})").find("plan.extra") != std::string::npos);
  CHECK(plan_error("{").find("invalid JSON") != std::string::npos);
}

TEST_CASE("a single-cell plan yields one cell") {
  ExperimentPlan plan = small_plan();
  plan.snr_points = {SnrPoint::Db(0)};
  plan.methods = {Method::kSingle};
  plan.anc = {false};
  const SweepReport r = run_sweep(plan, small_corpus());
  REQUIRE(r.cells.size() == 1);
  CHECK(r.cells[0].counts.total() == 8);
  CHECK(r.thresholds.size() == 1);
}

TEST_CASE("cells are sorted, counted and self-consistent") {
  const SweepReport r = run_sweep(small_plan(), small_corpus());
  REQUIRE(r.cells.size() == 8);
  CHECK_FALSE(r.has_errors());
  const std::vector<std::string> want = {
      "single,off,clean", "single,off,0", "single,on,clean", "single,on,0",
      "dual,off,clean",   "dual,off,0",   "dual,on,clean",   "dual,on,0"};
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    const auto& c = r.cells[i];
    CHECK(to_string(c.method) + "," + (c.anc ? "on" : "off") + "," + c.snr.label() == want[i]);
    CHECK(c.counts.total() == 8);
    CHECK(c.counts.tp + c.counts.fn == 4);
    CHECK(c.counts.tn + c.counts.fp == 4);
    CHECK(c.accuracy == static_cast<double>(c.counts.tp + c.counts.tn) / 8.0);
  }
  const std::string csv = curves_csv(r);
  CHECK(csv.rfind("method,anc,snr_db,tp,tn,fp,fn,accuracy\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
}

TEST_CASE("sweeps are deterministic regardless of thread count") {
  const Corpus corpus = small_corpus();
  ExperimentPlan a = small_plan();
  ExperimentPlan b = small_plan();
  b.threads = 1;
  const SweepReport ra = run_sweep(a, corpus);
  const SweepReport rb = run_sweep(b, corpus);
  CHECK(curves_csv(ra) == curves_csv(rb));
  CHECK(curves_csv(ra) == curves_csv(run_sweep(a, corpus)));
  CHECK(report_json(ra) == report_json(run_sweep(a, corpus)));
  CHECK(report_json(ra).find("wall_time_ms") == std::string::npos);
  CHECK(report_json(ra, true).find("wall_time_ms") != std::string::npos);
}

TEST_CASE("clean dual is not worse than its noisiest cell") {
  ExperimentPlan plan = small_plan();
  plan.snr_points = {SnrPoint::Clean(), SnrPoint::Db(-16)};
  plan.methods = {Method::kDual};
  plan.anc = {false};
  const SweepReport r = run_sweep(plan, small_corpus());
  REQUIRE(r.cells.size() == 2);
  CHECK(r.cells[0].snr.clean);
  CHECK(r.cells[0].accuracy >= r.cells[1].accuracy);
}

TEST_CASE("unusable corpora and trial counts") {
  ExperimentPlan plan = small_plan();
  plan.trials = 100;
  try {
    (void)run_sweep(plan, small_corpus());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("plan.trials") != std::string::npos);
  }
  CHECK_THROWS_AS(run_sweep(small_plan(), Corpus{}), ConfigError);

  CorpusSpec one;
  one.profiles = 1;
  one.words = 4;
  one.duration_s = 0.3;
  CHECK_THROWS_AS(run_sweep(small_plan(), synthesize_corpus(one)), ConfigError);
}

TEST_CASE("emit_curves") {
  const auto dir = oracle::scratch_dir("bench_curves");
  CHECK_THROWS_AS(emit_curves(SweepReport{}, dir / "x.csv"), ParameterError);

  ExperimentPlan plan = small_plan();
  plan.snr_points = {SnrPoint::Db(0)};
  plan.methods = {Method::kSingle};
  plan.anc = {false};
  const SweepReport r = run_sweep(plan, small_corpus());
  emit_curves(r, dir / "c.csv");
  std::ifstream in(dir / "c.csv", std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == curves_csv(r));
  CHECK_THROWS_AS(emit_curves(r, dir / "no_such_dir" / "c.csv"), IoError);
}

}  // TEST_SUITE
