// include/hlr/reduce/pca.hpp

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

#include "hlr/matrix.hpp"

namespace hlr {

/// Fitted PCA: transform(v) = components * (v - mean).
struct PcaParams {
  Vector mean;
  Matrix components;       ///< k x dims, orthonormal rows
  Vector singular_values;  ///< of the centered fit matrix, non-increasing
};

/// Mean removal followed by projecting out the top principal directions
/// ("all-but-the-top" post-processing). `top_components` may have zero rows.
struct PpaParams {
  Vector mean;
  Matrix top_components;  ///< D x dims, orthonormal rows
};

struct PcaOptions {
  enum class Solver { automatic, exact, randomized };
  Solver solver = Solver::automatic;
  /// Above this many dims the automatic solver switches to the randomized
  /// range finder.
  std::size_t exact_max_dims = 1024;
  std::size_t oversampling = 10;
  std::size_t power_iterations = 4;
  std::uint64_t seed = 0;
};

namespace pca {

/// Top-k principal directions of `x` (rows = samples). Throws ConfigError
/// unless 1 <= k <= min(rows - 1, dims).
PcaParams fit(const Matrix& x, std::size_t k, const PcaOptions& opts = {});
Matrix apply(const PcaParams& p, const Matrix& x);
/// mean + components^T * z, row-wise.
Matrix reconstruct(const PcaParams& p, const Matrix& z);
/// Sample-covariance eigenvalues captured by each component.
Vector explained_variance(const PcaParams& p, std::size_t n_rows);

/// D = floor(dims / 100) is the usual choice for `removed`.
PpaParams fit_ppa(const Matrix& x, std::size_t removed, const PcaOptions& opts = {});
Matrix apply_ppa(const PpaParams& p, const Matrix& x);

inline std::size_t ppa_removed_for(std::size_t dims) noexcept { return dims / 100; }

}  // namespace pca
}  // namespace hlr
