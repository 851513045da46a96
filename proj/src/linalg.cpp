// src/linalg.cpp

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

#include "hlr/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "hlr/error.hpp"
#include "hlr/simd/kernels.hpp"

namespace hlr::linalg {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> view(const Matrix& m) {
  return {m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols())};
}

Matrix from_eigen(const RowMajor& m) {
  Matrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  Eigen::Map<RowMajor>(out.data(), m.rows(), m.cols()) = m;
  return out;
}

void check_inner(std::size_t lhs, std::size_t rhs, const char* op) {
  if (lhs != rhs)
    throw ShapeError(std::string(op) + ": inner dimensions " + std::to_string(lhs) + " and " +
                     std::to_string(rhs) + " differ");
}

}  // namespace

Matrix multiply(const Matrix& a, const Matrix& b) {
  check_inner(a.cols(), b.rows(), "multiply");
  Matrix c(a.rows(), b.cols());
  const auto& k = simd::active_kernels();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* out = c.row(i).data();
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double s = a(i, l);
      if (s != 0.0) k.axpy(s, b.row(l).data(), out, b.cols());
    }
  }
  return c;
}

Matrix multiply_nt(const Matrix& a, const Matrix& b) {
  check_inner(a.cols(), b.cols(), "multiply_nt");
  Matrix c(a.rows(), b.rows());
  const auto& k = simd::active_kernels();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j)
      c(i, j) = k.dot(a.row(i).data(), b.row(j).data(), a.cols());
  return c;
}

Matrix multiply_tn(const Matrix& a, const Matrix& b) {
  check_inner(a.rows(), b.rows(), "multiply_tn");
  Matrix c(a.cols(), b.cols());
  const auto& k = simd::active_kernels();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double* brow = b.row(r).data();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double s = a(r, i);
      if (s != 0.0) k.axpy(s, brow, c.row(i).data(), b.cols());
    }
  }
  return c;
}

Vector multiply(const Matrix& a, std::span<const double> x) {
  check_inner(a.cols(), x.size(), "multiply");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = simd::dot(a.row(i), x);
  return y;
}

Vector column_means(const Matrix& x) {
  Vector mean(x.cols(), 0.0);
  if (x.rows() == 0) return mean;
  for (std::size_t r = 0; r < x.rows(); ++r) simd::axpy(1.0, x.row(r), mean);
  for (double& m : mean) m /= static_cast<double>(x.rows());
  return mean;
}

Matrix subtract_row_vector(const Matrix& x, std::span<const double> v) {
  check_inner(x.cols(), v.size(), "subtract_row_vector");
  Matrix out = x;
  for (std::size_t r = 0; r < out.rows(); ++r) simd::axpy(-1.0, v, out.row(r));
  return out;
}

double frobenius_sq(const Matrix& a) {
  return simd::dot(a.values(), a.values());
}

SymmetricEigen symmetric_eigen(const Matrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("symmetric_eigen: matrix is not square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(view(a), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericsError("eigendecomposition failed", 0);
  const auto n = static_cast<std::size_t>(a.rows());
  SymmetricEigen out{Vector(n), Matrix(n, n)};
  // Eigen returns ascending order; reverse it.
  for (std::size_t i = 0; i < n; ++i) {
    const auto src = static_cast<Eigen::Index>(n - 1 - i);
    out.values[i] = solver.eigenvalues()(src);
    for (std::size_t j = 0; j < n; ++j)
      out.vectors(i, j) = solver.eigenvectors()(static_cast<Eigen::Index>(j), src);
  }
  return out;
}

Matrix orthonormal_columns(const Matrix& a) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(view(a));
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
  return from_eigen(q);
}

SpdInverse spd_inverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("spd_inverse: matrix is not square");
  Eigen::LLT<Eigen::MatrixXd> llt(view(a));
  if (llt.info() != Eigen::Success) throw NumericsError("matrix is not positive definite", 0);
  SpdInverse out;
  out.inverse = from_eigen(llt.solve(Eigen::MatrixXd::Identity(a.rows(), a.cols())));
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) out.log_det += 2.0 * std::log(l(i, i));
  return out;
}

void canonicalize_row_signs(Matrix& rows) {
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    auto r = rows.row(i);
    std::size_t best = 0;
    for (std::size_t j = 1; j < r.size(); ++j)
      if (std::abs(r[j]) > std::abs(r[best])) best = j;
    if (!r.empty() && r[best] < 0.0)
      for (double& v : r) v = -v;
  }
}

}  // namespace hlr::linalg
