// include/hlr/error.hpp

// Copyright 2026  The hlr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hlr {

/// Base of every error raised by the library. Callers that only care about
/// success/failure catch this; the CLI maps ConfigError to exit code 2 and
/// everything else to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

/// Bad values in otherwise well-formed input. `row` is the zero-based data row
/// when one is known.
class DataError : public Error {
 public:
  static constexpr std::size_t kNoRow = static_cast<std::size_t>(-1);

  explicit DataError(const std::string& what, std::size_t row = kNoRow)
      : Error(row == kNoRow ? what : what + " (row " + std::to_string(row) + ")"),
        row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class NumericsError : public Error {
 public:
  NumericsError(const std::string& what, std::size_t iteration)
      : Error(what + " at iteration " + std::to_string(iteration)), iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class IncompleteGridError : public Error {
 public:
  using Error::Error;
};

}  // namespace hlr
