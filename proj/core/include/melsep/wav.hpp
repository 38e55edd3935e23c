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

#include <cstddef>
#include <filesystem>

#include "melsep/audio.hpp"

namespace melsep {

// Reads a RIFF/WAVE file holding 16-bit little-endian mono PCM. Samples are
// scaled by 1/32768.
// Throws IoError if the file cannot be opened, FormatError on a malformed
// header and UnsupportedFormatError for anything other than 16-bit mono PCM.
AudioBuffer read_wav(const std::filesystem::path& path);

struct WavWriteStats {
  // Samples outside [-1, 1] that were clipped before quantization.
  std::size_t clipped = 0;
};

// Writes 16-bit mono PCM. Samples must be finite (ParameterError otherwise).
WavWriteStats write_wav(const AudioBuffer& buffer,
                        const std::filesystem::path& path);

}  // namespace melsep
