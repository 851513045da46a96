// tests/support/oracles.hpp

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

// Reference implementations used only to check the library. They share no
// code with src/.

#include <cstddef>
#include <vector>

#include "hlr/matrix.hpp"

namespace hlr::testing {

struct JacobiEigen {
  std::vector<double> values;  ///< descending
  Matrix vectors;              ///< row i pairs with values[i]
};

/// Cyclic Jacobi rotations on a symmetric matrix, run to machine precision.
JacobiEigen jacobi_eigen(const Matrix& sym);

/// Centered scatter matrix Xc^T Xc computed with plain loops.
Matrix centered_scatter(const Matrix& x);

/// sin of the largest principal angle between the row spaces of `a` and `b`
/// (both with orthonormal rows), bounded above by ||A - A B^T B||_F.
double subspace_sine(const Matrix& a, const Matrix& b);

/// Solve the dense system a x = b by Gaussian elimination with partial pivoting.
std::vector<double> gauss_solve(Matrix a, std::vector<double> b);

}  // namespace hlr::testing
