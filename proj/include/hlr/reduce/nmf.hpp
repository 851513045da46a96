// include/hlr/reduce/nmf.hpp

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
#include <cstdint>
#include <vector>

#include "hlr/matrix.hpp"

namespace hlr {

/// X + shift ~ W * dictionary, everything nonnegative. The shift is learned
/// per column at fit time so that signed embeddings can be factorized.
struct NmfParams {
  Matrix dictionary;    ///< k x dims, entries >= 0
  Vector column_shift;  ///< dims, entries >= 0
};

struct NmfOptions {
  std::size_t iterations = 300;
  std::uint64_t seed = 0;
};

struct NmfFit {
  NmfParams params;
  /// Frobenius objective ||X' - W H||^2 before the first update and after
  /// each of the `iterations` updates.
  std::vector<double> objective;
};

namespace nmf {

inline constexpr std::size_t kProjectIterations = 200;

/// Lee-Seung multiplicative updates on the shifted matrix. Both factors
/// start from U(0, mean(X')) drawn from the seeded generator.
NmfFit fit(const Matrix& x, std::size_t k, const NmfOptions& opts = {});

/// Nonnegative codes for each row of `x`: min_{w >= 0} ||(v + shift)_+ - w H||^2
/// by a fixed number of multiplicative updates. Deterministic.
Matrix project(const NmfParams& p, const Matrix& x, std::size_t iterations = kProjectIterations);

/// ||X' - W H||^2 with X' = max(X + shift, 0).
double objective(const Matrix& shifted, const Matrix& w, const Matrix& h);

}  // namespace nmf
}  // namespace hlr
