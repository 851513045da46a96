// src/reduce/pca.cpp

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

#include "hlr/reduce/pca.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "hlr/error.hpp"
#include "hlr/linalg.hpp"
#include "hlr/rng.hpp"
#include "hlr/simd/kernels.hpp"

namespace hlr::pca {
namespace {

struct Basis {
  Matrix rows;  // k x dims
  Vector singular_values;
};

Basis exact_basis(const Matrix& centered, std::size_t k) {
  const Matrix gram = linalg::multiply_tn(centered, centered);
  auto eig = linalg::symmetric_eigen(gram);
  Basis b{Matrix(k, centered.cols()), Vector(k)};
  for (std::size_t i = 0; i < k; ++i) {
    b.singular_values[i] = std::sqrt(std::max(eig.values[i], 0.0));
    std::copy_n(eig.vectors.row(i).data(), centered.cols(), b.rows.row(i).data());
  }
  return b;
}

// Halko, Martinsson & Tropp range finder with subspace iteration.
Basis randomized_basis(const Matrix& centered, std::size_t k, const PcaOptions& opts) {
  const std::size_t n = centered.rows();
  const std::size_t d = centered.cols();
  const std::size_t l = std::min({k + opts.oversampling, n, d});

  Rng rng(derive_seed(opts.seed, "pca-range-finder"));
  Matrix omega(d, l);
  for (double& v : omega.values()) v = rng.normal();

  Matrix q = linalg::orthonormal_columns(linalg::multiply(centered, omega));
  for (std::size_t it = 0; it < opts.power_iterations; ++it) {
    const Matrix z = linalg::orthonormal_columns(linalg::multiply_tn(centered, q));
    q = linalg::orthonormal_columns(linalg::multiply(centered, z));
  }
  const Matrix small = linalg::multiply_tn(q, centered);  // l x d

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> bmap(small.data(), static_cast<Eigen::Index>(l),
                                  static_cast<Eigen::Index>(d));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(bmap, Eigen::ComputeThinV);
  Basis b{Matrix(k, d), Vector(k)};
  for (std::size_t i = 0; i < k; ++i) {
    b.singular_values[i] = svd.singularValues()(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < d; ++j)
      b.rows(i, j) = svd.matrixV()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
  }
  return b;
}

void check_rank_request(const Matrix& x, std::size_t k, const char* what) {
  if (x.rows() < 2) throw ConfigError(std::string(what) + " needs at least 2 rows");
  const std::size_t limit = std::min(x.rows() - 1, x.cols());
  if (k > limit)
    throw ConfigError(std::string(what) + ": k=" + std::to_string(k) +
                      " exceeds min(rows-1, dims)=" + std::to_string(limit));
}

void project_out(const Matrix& basis, std::span<double> v) {
  for (std::size_t i = 0; i < basis.rows(); ++i) {
    const double c = simd::dot(basis.row(i), v);
    simd::axpy(-c, basis.row(i), v);
  }
}

}  // namespace

PcaParams fit(const Matrix& x, std::size_t k, const PcaOptions& opts) {
  if (k == 0) throw ConfigError("pca: k must be >= 1");
  check_rank_request(x, k, "pca");
  PcaParams p;
  p.mean = linalg::column_means(x);
  const Matrix centered = linalg::subtract_row_vector(x, p.mean);

  bool randomized = opts.solver == PcaOptions::Solver::randomized;
  if (opts.solver == PcaOptions::Solver::automatic) randomized = x.cols() > opts.exact_max_dims;
  Basis b = randomized ? randomized_basis(centered, k, opts) : exact_basis(centered, k);
  linalg::canonicalize_row_signs(b.rows);
  p.components = std::move(b.rows);
  p.singular_values = std::move(b.singular_values);
  return p;
}

Matrix apply(const PcaParams& p, const Matrix& x) {
  if (x.cols() != p.mean.size())
    throw ShapeError("pca: input has " + std::to_string(x.cols()) + " dims, model expects " +
                     std::to_string(p.mean.size()));
  Matrix out(x.rows(), p.components.rows());
  Vector centered(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto src = x.row(r);
    for (std::size_t c = 0; c < centered.size(); ++c) centered[c] = src[c] - p.mean[c];
    for (std::size_t i = 0; i < p.components.rows(); ++i)
      out(r, i) = simd::dot(p.components.row(i), centered);
  }
  return out;
}

Matrix reconstruct(const PcaParams& p, const Matrix& z) {
  if (z.cols() != p.components.rows()) throw ShapeError("pca: reconstruct dims mismatch");
  Matrix out(z.rows(), p.mean.size());
  for (std::size_t r = 0; r < z.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(p.mean.begin(), p.mean.end(), dst.begin());
    for (std::size_t i = 0; i < z.cols(); ++i) simd::axpy(z(r, i), p.components.row(i), dst);
  }
  return out;
}

Vector explained_variance(const PcaParams& p, std::size_t n_rows) {
  Vector v(p.singular_values.size());
  const double denom = static_cast<double>(n_rows) - 1.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = p.singular_values[i] * p.singular_values[i] / denom;
  return v;
}

PpaParams fit_ppa(const Matrix& x, std::size_t removed, const PcaOptions& opts) {
  PpaParams p;
  if (removed == 0) {
    p.mean = linalg::column_means(x);
    p.top_components = Matrix(0, x.cols());
    return p;
  }
  check_rank_request(x, removed, "ppa");
  PcaParams inner = fit(x, removed, opts);
  p.mean = std::move(inner.mean);
  p.top_components = std::move(inner.components);
  return p;
}

Matrix apply_ppa(const PpaParams& p, const Matrix& x) {
  if (x.cols() != p.mean.size()) throw ShapeError("ppa: input dims mismatch");
  Matrix out = linalg::subtract_row_vector(x, p.mean);
  for (std::size_t r = 0; r < out.rows(); ++r) project_out(p.top_components, out.row(r));
  return out;
}

}  // namespace hlr::pca
