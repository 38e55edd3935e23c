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

#include "melsep/corpus.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "melsep/error.hpp"
#include "melsep/hash.hpp"
#include "melsep/wav.hpp"

namespace melsep {

using nlohmann::json;

std::string utterance_id(int profile_id, int word_id) {
  return "p" + std::to_string(profile_id) + "_w" + std::to_string(word_id);
}

std::uint64_t utterance_seed(std::uint64_t corpus_seed, int profile_id,
                             int word_id) {
  return mix_seed(corpus_seed, fnv1a64(utterance_id(profile_id, word_id)));
}

Corpus synthesize_corpus(const CorpusSpec& spec) {
  if (spec.profiles <= 0 || spec.words <= 0) {
    throw ParameterError("synthesize_corpus: profile and word counts must be positive");
  }
  Corpus corpus;
  corpus.reserve(static_cast<std::size_t>(spec.profiles * spec.words));
  for (int p = 0; p < spec.profiles; ++p) {
    for (int w = 0; w < spec.words; ++w) {
      CorpusUtterance u;
      u.entry.profile_id = p;
      u.entry.word_id = w;
      u.entry.seed = utterance_seed(spec.seed, p, w);
      u.entry.path = utterance_id(p, w) + ".wav";
      u.audio = synth_speaker(p, w, spec.duration_s, u.entry.seed,
                              spec.sample_rate_hz);
      corpus.push_back(std::move(u));
    }
  }
  return corpus;
}

std::string manifest_json(const std::vector<CorpusEntry>& entries) {
  json arr = json::array();
  for (const auto& e : entries) {
    arr.push_back({{"profile_id", e.profile_id},
                   {"word_id", e.word_id},
                   {"seed", e.seed},
                   {"path", e.path.generic_string()}});
  }
  return arr.dump(2) + "\n";
}

std::filesystem::path write_corpus(const Corpus& corpus,
                                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::vector<CorpusEntry> entries;
  entries.reserve(corpus.size());
  for (const auto& u : corpus) {
    CorpusEntry e = u.entry;
    e.path = utterance_id(e.profile_id, e.word_id) + ".wav";
    write_wav(u.audio, dir / e.path);
    entries.push_back(std::move(e));
  }
  const auto manifest = dir / "manifest.json";
  std::ofstream out(manifest, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + manifest.string());
  out << manifest_json(entries);
  if (!out) throw IoError("write failed for " + manifest.string());
  return manifest;
}

std::vector<CorpusEntry> read_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IoError("cannot open manifest " + manifest.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(manifest.string() + ": invalid JSON: " + e.what());
  }
  if (!doc.is_array()) {
    throw ConfigError(manifest.string() + ": manifest must be a JSON array");
  }
  const auto base = manifest.parent_path();
  std::vector<CorpusEntry> entries;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& item = doc[i];
    const auto field = [&](const char* name) -> const json& {
      const std::string where =
          manifest.string() + ": entry [" + std::to_string(i) + "]." + name;
      if (!item.is_object() || !item.contains(name)) {
        throw ConfigError(where + " is missing");
      }
      return item.at(name);
    };
    CorpusEntry e;
    const auto integer = [&](const char* name) {
      const json& v = field(name);
      if (!v.is_number_integer()) {
        throw ConfigError(manifest.string() + ": entry [" + std::to_string(i) +
                          "]." + name + " must be an integer");
      }
      return v;
    };
    e.profile_id = integer("profile_id").get<int>();
    e.word_id = integer("word_id").get<int>();
    e.seed = integer("seed").get<std::uint64_t>();
    const json& p = field("path");
    if (!p.is_string()) {
      throw ConfigError(manifest.string() + ": entry [" + std::to_string(i) +
                        "].path must be a string");
    }
    std::filesystem::path path = p.get<std::string>();
    e.path = path.is_absolute() ? path : base / path;
    entries.push_back(std::move(e));
  }
  return entries;
}

Corpus load_corpus(const std::filesystem::path& manifest) {
  Corpus corpus;
  for (auto& e : read_manifest(manifest)) {
    CorpusUtterance u;
    u.audio = read_wav(e.path);
    u.entry = std::move(e);
    corpus.push_back(std::move(u));
  }
  return corpus;
}

std::string corpus_digest(const Corpus& corpus) {
  std::uint64_t h = fnv1a64("");
  for (const auto& u : corpus) {
    h = fnv1a64(utterance_id(u.entry.profile_id, u.entry.word_id), h);
    h = fnv1a64(std::to_string(u.entry.seed), h);
    for (double x : u.audio.samples) {
      const auto bits = std::bit_cast<std::uint64_t>(x);
      char raw[8];
      for (int b = 0; b < 8; ++b) raw[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
      h = fnv1a64(std::string_view(raw, 8), h);
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace melsep
