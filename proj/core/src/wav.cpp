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

#include "melsep/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "melsep/error.hpp"

namespace melsep {
namespace {

constexpr std::uint16_t kFormatPcm = 1;

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
  }
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                         std::istreambuf_iterator<char>()};
  const std::string where = path.string() + ": ";

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError(where + "not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t len = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (len > bytes.size() - body) {
      throw FormatError(where + "chunk extends past end of file");
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (len < 16) throw FormatError(where + "fmt chunk too short");
      const unsigned char* f = bytes.data() + body;
      format = le16(f);
      channels = le16(f + 2);
      rate = le32(f + 4);
      bits = le16(f + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = len;
    }
    pos = body + len + (len & 1);
  }

  if (!have_fmt) throw FormatError(where + "missing fmt chunk");
  if (data == nullptr) throw FormatError(where + "missing data chunk");
  if (format != kFormatPcm) {
    throw UnsupportedFormatError(where + "format tag " +
                                 std::to_string(format) + " is not PCM");
  }
  if (channels != 1) {
    throw UnsupportedFormatError(where + std::to_string(channels) +
                                 " channels; only mono is supported");
  }
  if (bits != 16) {
    throw UnsupportedFormatError(where + std::to_string(bits) +
                                 "-bit samples; only 16-bit is supported");
  }
  if (rate == 0) throw FormatError(where + "sample rate is zero");
  if (data_len % 2 != 0) throw FormatError(where + "odd data chunk length");

  AudioBuffer out;
  out.sample_rate_hz = static_cast<int>(rate);
  out.samples.resize(data_len / 2);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const auto v = static_cast<std::int16_t>(le16(data + 2 * i));
    out.samples[i] = static_cast<double>(v) / 32768.0;
  }
  return out;
}

WavWriteStats write_wav(const AudioBuffer& buffer,
                        const std::filesystem::path& path) {
  WavWriteStats stats;
  std::vector<unsigned char> payload;
  payload.reserve(buffer.size() * 2);
  for (double x : buffer.samples) {
    if (!std::isfinite(x)) {
      throw ParameterError("write_wav: non-finite sample");
    }
    if (x > 1.0 || x < -1.0) ++stats.clipped;
    const double clipped = std::clamp(x, -1.0, 1.0);
    const long q = std::clamp(std::lround(clipped * 32768.0), -32768L, 32767L);
    put16(payload, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }

  const auto data_len = static_cast<std::uint32_t>(payload.size());
  std::vector<unsigned char> out;
  out.reserve(44 + payload.size());
  put_tag(out, "RIFF");
  put32(out, 36 + data_len);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(buffer.sample_rate_hz));
  put32(out, static_cast<std::uint32_t>(buffer.sample_rate_hz) * 2);
  put16(out, 2);
  put16(out, 16);
  put_tag(out, "data");
  put32(out, data_len);
  out.insert(out.end(), payload.begin(), payload.end());

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("write failed for " + path.string());
  return stats;
}

}  // namespace melsep
