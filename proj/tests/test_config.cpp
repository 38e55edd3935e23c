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

#include <fstream>

#include "doctest.h"
#include "melsep/config.hpp"
#include "melsep/error.hpp"
#include "oracles.hpp"

using namespace melsep;

namespace {

std::string error_of(const std::string& json) {
  try {
    (void)parse_config(json);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults are valid and carry calibrated thresholds") {
  const PipelineConfig c = default_pipeline_config();
  c.validate();
  CHECK(c.threshold_single > 0.0);
  CHECK(c.threshold_dual > 0.0);
  CHECK(c.anc.lms.order == 31);
  CHECK(c.anc.lms.step == 0.005);
  CHECK(c.extraction.frame_len == 400);
  CHECK(c.kmeans.k == 2);
}

TEST_CASE("load -> save -> load is the identity") {
  const auto dir = oracle::scratch_dir("config_rt");
  PipelineConfig c = default_pipeline_config();
  c.extraction.ch2_filters = 16;
  c.anc.lms.order = 7;
  c.anc.lms.initial_weights.assign(8, 0.125);
  c.kmeans.k = 3;
  c.threshold_dual = 3.25;
  c.corpus.profiles = 4;
  c.cluster_seed = 123456789;
  save_config(c, dir / "a.json");
  const PipelineConfig back = load_config(dir / "a.json");
  CHECK(back == c);
  save_config(back, dir / "b.json");
  CHECK(load_config(dir / "b.json") == c);
}

TEST_CASE("partial configs keep defaults") {
  const PipelineConfig c = parse_config(R"({"kmeans": {"k": 3}})");
  PipelineConfig expect = default_pipeline_config();
  expect.kmeans.k = 3;
  CHECK(c == expect);
}

TEST_CASE("errors name the offending field") {
  CHECK(error_of(R"({"extraction": {"band_hi_hz": 9000}})").find("extraction.band_hi_hz") != std::string::npos);
  CHECK(error_of(R"({"extraction": {"fft_size": 500}})").find("extraction.fft_size") != std::string::npos);
  CHECK(error_of(R"({"anc": {"step": -1}})").find("anc.step") != std::string::npos);
  CHECK(error_of(R"({"anc": {"order": "x"}})").find("anc.order") != std::string::npos);
  CHECK(error_of(R"({"kmeans": {"kk": 2}})").find("kmeans.kk") != std::string::npos);
  CHECK(error_of(R"({"threshold": {"dual": -2}})").find("threshold.dual") != std::string::npos);
  CHECK(error_of(R"({"corpus": {"profiles": 0}})").find("corpus.profiles") != std::string::npos);
  CHECK(error_of(R"({"anc": {"order": 3, "initial_weights": [1, 2]}})").find("anc.initial_weights") != std::string::npos);
  CHECK(error_of(R"({"bogus": 1})").find("bogus") != std::string::npos);
  CHECK(error_of("[1, 2").find("invalid JSON") != std::string::npos);
  CHECK(error_of("[]").size() > 0);
}

TEST_CASE("load_config reports the path") {
  const auto dir = oracle::scratch_dir("config_bad");
  CHECK_THROWS_AS(load_config(dir / "missing.json"), IoError);
  {
    std::ofstream f(dir / "bad.json");
    f << R"({"kmeans": {"tol": "tiny"}})";
  }
  try {
    (void)load_config(dir / "bad.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bad.json") != std::string::npos);
    CHECK(msg.find("kmeans.tol") != std::string::npos);
  }
}

}  // TEST_SUITE
