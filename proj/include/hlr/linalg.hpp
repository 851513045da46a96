// include/hlr/linalg.hpp

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
#include <span>
#include <vector>

#include "hlr/matrix.hpp"

namespace hlr::linalg {

// Row-major products routed through the active SIMD kernels. Summation order
// for each output element is fixed, independent of thread count.

/// c = a * b
Matrix multiply(const Matrix& a, const Matrix& b);
/// c = a * b^T
Matrix multiply_nt(const Matrix& a, const Matrix& b);
/// c = a^T * b
Matrix multiply_tn(const Matrix& a, const Matrix& b);
/// y = a * x
Vector multiply(const Matrix& a, std::span<const double> x);

Vector column_means(const Matrix& x);
/// x - 1 * mean^T
Matrix subtract_row_vector(const Matrix& x, std::span<const double> v);
double frobenius_sq(const Matrix& a);

struct SymmetricEigen {
  Vector values;  ///< descending
  Matrix vectors; ///< row i is the unit eigenvector for values[i]
};

/// Full eigendecomposition of a symmetric matrix, eigenvalues sorted in
/// descending order.
SymmetricEigen symmetric_eigen(const Matrix& a);

/// Orthonormal basis of the column space of `a` (thin QR), returned as a
/// matrix with the same shape as `a`.
Matrix orthonormal_columns(const Matrix& a);

/// Inverse of a small symmetric positive definite matrix and its log
/// determinant. Throws NumericsError(0) if not positive definite.
struct SpdInverse {
  Matrix inverse;
  double log_det = 0.0;
};
SpdInverse spd_inverse(const Matrix& a);

/// Flip each row so its entry of largest magnitude is positive (first such
/// entry on ties).
void canonicalize_row_signs(Matrix& rows);

}  // namespace hlr::linalg
