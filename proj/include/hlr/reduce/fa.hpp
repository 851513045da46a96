// include/hlr/reduce/fa.hpp

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
#include <vector>

#include "hlr/matrix.hpp"

namespace hlr {

/// Gaussian factor model x = loadings * z + mean + e, e ~ N(0, diag(noise)).
struct FaParams {
  Matrix loadings;  ///< dims x k
  Vector noise_diag;
  Vector mean;
};

struct FaOptions {
  std::size_t max_iterations = 200;
  /// Stop when |dLL| <= tol * |LL|.
  double tol = 1e-6;
  double psi_floor = 1e-6;
};

struct FaFit {
  FaParams params;
  /// Mean per-row log-likelihood of each parameter state visited, starting
  /// with the initial one.
  std::vector<double> log_likelihood;
  std::size_t iterations = 0;
  /// Noise variances clamped to psi_floor, summed over all M-steps.
  std::size_t clamped = 0;
};

namespace fa {

/// EM on the sample covariance. Initialized from the probabilistic-PCA
/// solution, so no random seed is involved.
FaFit fit(const Matrix& x, std::size_t k, const FaOptions& opts = {});

/// E[z | v] = L^T (L L^T + Psi)^-1 (v - mean), via the k x k Woodbury form.
Matrix posterior_means(const FaParams& p, const Matrix& x);

/// Mean per-row Gaussian log-likelihood of the model given the sample
/// covariance `cov` (normalized by n).
double mean_log_likelihood(const FaParams& p, const Matrix& cov);

}  // namespace fa
}  // namespace hlr
