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
#include <vector>

#include "melsep/audio.hpp"

namespace melsep {

// One line of the corpus manifest.
struct CorpusEntry {
  int profile_id = 0;
  int word_id = 0;
  std::uint64_t seed = 0;
  std::filesystem::path path;  // absolute once loaded

  friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

struct CorpusUtterance {
  CorpusEntry entry;
  AudioBuffer audio;
};

using Corpus = std::vector<CorpusUtterance>;

struct CorpusSpec {
  int profiles = 8;
  int words = 10;
  double duration_s = 1.0;
  int sample_rate_hz = kDefaultSampleRate;
  std::uint64_t seed = 2021;

  friend bool operator==(const CorpusSpec&, const CorpusSpec&) = default;
};

// Stable identifier "p<profile>_w<word>" used for file names and seeding.
std::string utterance_id(int profile_id, int word_id);

// Per-utterance seed derived from the corpus seed.
std::uint64_t utterance_seed(std::uint64_t corpus_seed, int profile_id,
                             int word_id);

// Generates profiles x words utterances in memory (profile-major order).
// Throws ParameterError for non-positive counts or duration.
Corpus synthesize_corpus(const CorpusSpec& spec);

// Writes one WAV per utterance plus manifest.json into `dir` (created if
// needed) and returns the manifest path. Manifest paths are relative to the
// manifest's directory.
std::filesystem::path write_corpus(const Corpus& corpus,
                                   const std::filesystem::path& dir);

// Parses a manifest: JSON array of {profile_id, word_id, seed, path}.
// Relative paths resolve against the manifest's directory.
// Throws IoError / ConfigError (naming the offending element and field).
std::vector<CorpusEntry> read_manifest(const std::filesystem::path& manifest);

// read_manifest followed by read_wav of every entry.
Corpus load_corpus(const std::filesystem::path& manifest);

// Serialized manifest text for the given entries (paths written as given).
std::string manifest_json(const std::vector<CorpusEntry>& entries);

// FNV-1a digest over the (profile, word, seed) triples and the raw samples,
// as 16 hex digits. Independent of where the files live.
std::string corpus_digest(const Corpus& corpus);

}  // namespace melsep
