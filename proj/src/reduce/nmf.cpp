// src/reduce/nmf.cpp

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

#include "hlr/reduce/nmf.hpp"

#include <algorithm>
#include <limits>

#include "hlr/error.hpp"
#include "hlr/linalg.hpp"
#include "hlr/rng.hpp"
#include "hlr/simd/kernels.hpp"

namespace hlr::nmf {
namespace {

// Added to every update denominator. Keeps zero rows finite without breaking
// the majorization argument (a larger diagonal is still an upper bound).
constexpr double kEps = 1e-12;

Matrix shifted(const Matrix& x, const Vector& shift) {
  Matrix out = x;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = std::max(row[c] + shift[c], 0.0);
  }
  return out;
}

}  // namespace

double objective(const Matrix& shifted_x, const Matrix& w, const Matrix& h) {
  const Matrix wh = linalg::multiply(w, h);
  return simd::squared_distance(shifted_x.values(), wh.values());
}

NmfFit fit(const Matrix& x, std::size_t k, const NmfOptions& opts) {
  if (x.rows() < 2) throw ConfigError("nmf needs at least 2 rows");
  if (k == 0 || k > x.cols())
    throw ConfigError("nmf: k=" + std::to_string(k) + " must be in [1, dims]");

  NmfFit out;
  out.params.column_shift.assign(x.cols(), 0.0);
  for (std::size_t c = 0; c < x.cols(); ++c) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < x.rows(); ++r) lo = std::min(lo, x(r, c));
    out.params.column_shift[c] = std::max(0.0, -lo);
  }
  const Matrix xs = shifted(x, out.params.column_shift);

  double mean = 0.0;
  for (double v : xs.values()) mean += v;
  mean /= static_cast<double>(xs.size());
  if (mean <= 0.0) mean = 1.0;

  Rng rng(derive_seed(opts.seed, "nmf-init"));
  Matrix w(x.rows(), k);
  Matrix h(k, x.cols());
  for (double& v : w.values()) v = rng.uniform(0.0, mean);
  for (double& v : h.values()) v = rng.uniform(0.0, mean);

  out.objective.reserve(opts.iterations + 1);
  out.objective.push_back(objective(xs, w, h));
  for (std::size_t it = 0; it < opts.iterations; ++it) {
    {
      const Matrix num = linalg::multiply_tn(w, xs);
      const Matrix den = linalg::multiply(linalg::multiply_tn(w, w), h);
      simd::multiplicative_update(h.values(), num.values(), den.values(), kEps);
    }
    {
      const Matrix num = linalg::multiply_nt(xs, h);
      const Matrix den = linalg::multiply(w, linalg::multiply_nt(h, h));
      simd::multiplicative_update(w.values(), num.values(), den.values(), kEps);
    }
    out.objective.push_back(objective(xs, w, h));
  }
  out.params.dictionary = std::move(h);
  return out;
}

Matrix project(const NmfParams& p, const Matrix& x, std::size_t iterations) {
  const std::size_t k = p.dictionary.rows();
  if (x.cols() != p.dictionary.cols()) throw ShapeError("nmf: input dims mismatch");
  const Matrix xs = shifted(x, p.column_shift);
  const Matrix gram = linalg::multiply_nt(p.dictionary, p.dictionary);  // k x k
  const Matrix rhs = linalg::multiply_nt(xs, p.dictionary);             // n x k

  // Start every code at the best uniform scale c*1, c = <v, s>/<s, s> with
  // s the column sums of H; multiplicative updates cannot leave zero.
  Vector colsum(x.cols(), 0.0);
  for (std::size_t i = 0; i < k; ++i) simd::axpy(1.0, p.dictionary.row(i), colsum);
  const double ss = simd::dot(colsum, colsum);

  Matrix codes(x.rows(), k);
  Vector den(k);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto w = codes.row(r);
    double c = ss > 0.0 ? simd::dot(xs.row(r), colsum) / ss : 0.0;
    if (c <= 0.0) continue;
    std::fill(w.begin(), w.end(), c);
    for (std::size_t it = 0; it < iterations; ++it) {
      for (std::size_t i = 0; i < k; ++i) den[i] = simd::dot(gram.row(i), w);
      simd::multiplicative_update(w, rhs.row(r), den, kEps);
    }
  }
  return codes;
}

}  // namespace hlr::nmf
