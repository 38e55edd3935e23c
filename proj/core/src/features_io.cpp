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

#include "melsep/features_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "melsep/error.hpp"

namespace melsep {

using nlohmann::json;

FeatureSidecar make_sidecar(const FeatureMatrix& features,
                            const MelFilterbank& bank,
                            const ExtractionConfig& cfg) {
  FeatureSidecar s;
  s.channel = features.channel;
  s.frame_len = cfg.frame_len;
  s.frame_shift = cfg.frame_shift;
  s.fft_size = bank.fft_size;
  s.num_filters = bank.num_filters;
  s.num_coeffs = features.num_coeffs;
  s.band_lo_hz = bank.band_lo_hz;
  s.band_hi_hz = bank.band_hi_hz;
  s.sample_rate_hz = bank.sample_rate_hz;
  return s;
}

void write_features_csv(const FeatureMatrix& features,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "frame_index";
  for (std::size_t q = 1; q <= features.rows.cols(); ++q) out << ",C_" << q;
  out << '\n';
  char cell[40];
  for (std::size_t r = 0; r < features.rows.rows(); ++r) {
    out << r;
    for (double v : features.rows.row(r)) {
      std::snprintf(cell, sizeof cell, ",%.17g", v);
      out << cell;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

FeatureMatrix read_features_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("frame_index", 0) != 0) {
    throw FormatError(path.string() + ": missing frame_index header");
  }
  FeatureMatrix out;
  std::vector<double> row;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    row.clear();
    bool first = true;
    while (std::getline(ss, cell, ',')) {
      if (first) {
        first = false;
        continue;
      }
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) +
                          ": bad number '" + cell + "'");
      }
    }
    if (out.rows.rows() == 0) out.rows = Matrix(0, row.size());
    if (row.size() != out.rows.cols()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": inconsistent column count");
    }
    out.rows.append_row(row);
  }
  out.num_coeffs = out.rows.cols();
  return out;
}

void write_sidecar_json(const FeatureSidecar& s,
                        const std::filesystem::path& path) {
  const json doc = {{"channel_id", to_string(s.channel)},
                    {"N", s.frame_len},
                    {"M", s.frame_shift},
                    {"K", s.fft_size},
                    {"P", s.num_filters},
                    {"Q", s.num_coeffs},
                    {"band_lo", s.band_lo_hz},
                    {"band_hi", s.band_hi_hz},
                    {"sample_rate", s.sample_rate_hz}};
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

FeatureSidecar read_sidecar_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    const json doc = json::parse(in);
    FeatureSidecar s;
    s.channel = channel_from_string(doc.at("channel_id").get<std::string>());
    s.frame_len = doc.at("N").get<std::size_t>();
    s.frame_shift = doc.at("M").get<std::size_t>();
    s.fft_size = doc.at("K").get<std::size_t>();
    s.num_filters = doc.at("P").get<std::size_t>();
    s.num_coeffs = doc.at("Q").get<std::size_t>();
    s.band_lo_hz = doc.at("band_lo").get<double>();
    s.band_hi_hz = doc.at("band_hi").get<double>();
    s.sample_rate_hz = doc.at("sample_rate").get<int>();
    return s;
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace melsep
