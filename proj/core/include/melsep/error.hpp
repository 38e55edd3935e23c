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
#include <stdexcept>
#include <string>

namespace melsep {

// Base of every error raised by the library. Callers that only care about
// "did the pipeline fail" catch this; the subclasses carry the category.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input bytes (e.g. a broken RIFF header).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Well-formed input we deliberately do not handle (stereo, 24-bit, ...).
class UnsupportedFormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Length / shape mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Out-of-range or inconsistent numeric parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// SNR is undefined because the reference signal has zero power.
class UndefinedSnrError : public Error {
 public:
  using Error::Error;
};

// Accuracy (or another ratio) over an empty denominator.
class UndefinedError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration file, plan or corpus manifest. The message names the
// offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The adaptive filter produced a non-finite weight.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t step, const std::string& what)
      : Error(what), step_(step) {}

  // Zero-based sample index at which the first non-finite weight appeared.
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace melsep
