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

#include <filesystem>

#include "melsep/mfcc.hpp"

namespace melsep {

// Everything needed to interpret an exported feature CSV.
struct FeatureSidecar {
  ChannelId channel = ChannelId::kSingle;
  std::size_t frame_len = 0;
  std::size_t frame_shift = 0;
  std::size_t fft_size = 0;
  std::size_t num_filters = 0;
  std::size_t num_coeffs = 0;
  double band_lo_hz = 0.0;
  double band_hi_hz = 0.0;
  int sample_rate_hz = 0;

  friend bool operator==(const FeatureSidecar&, const FeatureSidecar&) = default;
};

FeatureSidecar make_sidecar(const FeatureMatrix& features,
                            const MelFilterbank& bank,
                            const ExtractionConfig& cfg);

// Header "frame_index,C_1,...,C_Q" then one row per frame.
void write_features_csv(const FeatureMatrix& features,
                        const std::filesystem::path& path);

// Parses a CSV written by write_features_csv. Throws IoError / FormatError.
FeatureMatrix read_features_csv(const std::filesystem::path& path);

void write_sidecar_json(const FeatureSidecar& sidecar,
                        const std::filesystem::path& path);
FeatureSidecar read_sidecar_json(const std::filesystem::path& path);

}  // namespace melsep
