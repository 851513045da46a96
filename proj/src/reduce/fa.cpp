// src/reduce/fa.cpp

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

#include "hlr/reduce/fa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hlr/error.hpp"
#include "hlr/linalg.hpp"
#include "hlr/simd/kernels.hpp"

namespace hlr::fa {
namespace {

// Quantities shared by the E-step, the likelihood and the transform.
struct Posterior {
  Matrix scaled;     // Psi^-1 L, dims x k
  linalg::SpdInverse m;  // (I + L^T Psi^-1 L)^-1 and log|M|
  Matrix beta;       // M^-1 L^T Psi^-1, k x dims
};

Posterior posterior(const FaParams& p) {
  const std::size_t d = p.loadings.rows();
  const std::size_t k = p.loadings.cols();
  Posterior post;
  post.scaled = p.loadings;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < k; ++j) post.scaled(i, j) /= p.noise_diag[i];
  Matrix m = linalg::multiply_tn(p.loadings, post.scaled);
  for (std::size_t j = 0; j < k; ++j) m(j, j) += 1.0;
  post.m = linalg::spd_inverse(m);
  post.beta = linalg::multiply_nt(post.m.inverse, post.scaled);
  return post;
}

double log_likelihood(const FaParams& p, const Posterior& post, const Matrix& cov) {
  const std::size_t d = cov.rows();
  double log_det = post.m.log_det;
  double trace = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    log_det += std::log(p.noise_diag[i]);
    trace += cov(i, i) / p.noise_diag[i];
  }
  // tr(Sigma^-1 S) = tr(Psi^-1 S) - tr(M^-1 A^T S A), A = Psi^-1 L.
  const Matrix sa = linalg::multiply(cov, post.scaled);
  const Matrix inner = linalg::multiply_tn(post.scaled, sa);
  const std::size_t k = inner.rows();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) trace -= post.m.inverse(i, j) * inner(j, i);
  return -0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) + log_det + trace);
}

}  // namespace

double mean_log_likelihood(const FaParams& p, const Matrix& cov) {
  return log_likelihood(p, posterior(p), cov);
}

FaFit fit(const Matrix& x, std::size_t k, const FaOptions& opts) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (n < 2) throw ConfigError("fa needs at least 2 rows");
  if (k == 0 || k > d) throw ConfigError("fa: k=" + std::to_string(k) + " must be in [1, dims]");
  if (!(opts.psi_floor > 0.0)) throw ConfigError("fa: psi_floor must be positive");

  FaFit out;
  FaParams& p = out.params;
  p.mean = linalg::column_means(x);
  const Matrix centered = linalg::subtract_row_vector(x, p.mean);
  Matrix cov = linalg::multiply_tn(centered, centered);
  for (double& v : cov.values()) v /= static_cast<double>(n);

  // Probabilistic PCA start: L = V (Lambda - sigma^2)^{1/2}, sigma^2 the mean
  // discarded eigenvalue.
  const auto eig = linalg::symmetric_eigen(cov);
  double sigma2 = 0.0;
  for (std::size_t i = k; i < d; ++i) sigma2 += std::max(eig.values[i], 0.0);
  sigma2 = d > k ? sigma2 / static_cast<double>(d - k) : 0.0;
  p.loadings = Matrix(d, k);
  for (std::size_t j = 0; j < k; ++j) {
    const double lam = std::max(eig.values[j], 0.0);
    const double scale = std::sqrt(std::max(lam - sigma2, 1e-3 * lam + 1e-12));
    for (std::size_t i = 0; i < d; ++i) p.loadings(i, j) = eig.vectors(j, i) * scale;
  }
  p.noise_diag.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    double communality = 0.0;
    for (std::size_t j = 0; j < k; ++j) communality += p.loadings(i, j) * p.loadings(i, j);
    p.noise_diag[i] = std::max(cov(i, i) - communality, std::max(opts.psi_floor, 1e-3 * cov(i, i)));
  }

  Posterior post = posterior(p);
  double ll = log_likelihood(p, post, cov);
  out.log_likelihood.push_back(ll);
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    // E-step: E[z z^T] summed and normalized = M^-1 + beta S beta^T.
    const Matrix s_beta_t = linalg::multiply_nt(cov, post.beta);  // d x k
    Matrix ezz = linalg::multiply(post.beta, s_beta_t);          // k x k
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) ezz(i, j) += post.m.inverse(i, j);
    // Symmetrize before the Cholesky; rounding can leave it slightly skewed.
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) ezz(i, j) = ezz(j, i) = 0.5 * (ezz(i, j) + ezz(j, i));

    // M-step.
    p.loadings = linalg::multiply(s_beta_t, linalg::spd_inverse(ezz).inverse);
    for (std::size_t i = 0; i < d; ++i) {
      const double explained = simd::dot(p.loadings.row(i), s_beta_t.row(i));
      double psi = cov(i, i) - explained;
      if (psi < opts.psi_floor) {
        psi = opts.psi_floor;
        ++out.clamped;
      }
      p.noise_diag[i] = psi;
    }

    post = posterior(p);
    const double next = log_likelihood(p, post, cov);
    out.log_likelihood.push_back(next);
    ++out.iterations;
    if (!std::isfinite(next)) throw NumericsError("fa: log-likelihood is not finite", it + 1);
    const bool converged = std::abs(next - ll) <= opts.tol * std::abs(ll);
    ll = next;
    if (converged) break;
  }
  return out;
}

Matrix posterior_means(const FaParams& p, const Matrix& x) {
  if (x.cols() != p.mean.size()) throw ShapeError("fa: input dims mismatch");
  const Posterior post = posterior(p);
  const Matrix centered = linalg::subtract_row_vector(x, p.mean);
  return linalg::multiply_nt(centered, post.beta);
}

}  // namespace hlr::fa
