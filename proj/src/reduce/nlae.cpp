// src/reduce/nlae.cpp

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

#include "hlr/reduce/nlae.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hlr/error.hpp"
#include "hlr/linalg.hpp"
#include "hlr/rng.hpp"
#include "hlr/simd/kernels.hpp"

namespace hlr {

void NlaeParams::for_each(const std::function<void(std::span<double>)>& fn) {
  fn(w1.values());
  fn(b1);
  fn(w2.values());
  fn(b2);
  fn(dec_w2.values());
  fn(dec_b2);
  fn(dec_w1.values());
  fn(dec_b1);
}

void NlaeParams::for_each(const std::function<void(std::span<const double>)>& fn) const {
  fn(w1.values());
  fn(b1);
  fn(w2.values());
  fn(b2);
  fn(dec_w2.values());
  fn(dec_b2);
  fn(dec_w1.values());
  fn(dec_b1);
}

namespace nlae {
namespace {

void add_bias(Matrix& m, const Vector& b) {
  for (std::size_t r = 0; r < m.rows(); ++r) simd::axpy(1.0, b, m.row(r));
}

void relu_inplace(Matrix& m, Matrix* mask) {
  if (mask) *mask = Matrix(m.rows(), m.cols());
  simd::relu(m.values(), m.values(), mask ? mask->data() : nullptr);
}

void hadamard(Matrix& m, const Matrix& mask) {
  double* a = m.data();
  const double* b = mask.data();
  for (std::size_t i = 0; i < m.size(); ++i) a[i] *= b[i];
}

Vector column_sums(const Matrix& m) {
  Vector s(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) simd::axpy(1.0, m.row(r), s);
  return s;
}

struct Forward {
  Matrix h1, mask1;    // encoder hidden
  Matrix code, mask2;  // x_comp
  Matrix h3, mask3;    // decoder hidden
  Matrix recon;
};

Forward forward(const NlaeParams& p, const Matrix& x, bool keep_masks) {
  Forward f;
  f.h1 = linalg::multiply(x, p.w1);
  add_bias(f.h1, p.b1);
  relu_inplace(f.h1, keep_masks ? &f.mask1 : nullptr);
  f.code = linalg::multiply(f.h1, p.w2);
  add_bias(f.code, p.b2);
  relu_inplace(f.code, keep_masks ? &f.mask2 : nullptr);
  f.h3 = linalg::multiply(f.code, p.dec_w2);
  add_bias(f.h3, p.dec_b2);
  relu_inplace(f.h3, keep_masks ? &f.mask3 : nullptr);
  f.recon = linalg::multiply(f.h3, p.dec_w1);
  add_bias(f.recon, p.dec_b1);
  return f;
}

Matrix uniform_matrix(std::size_t rows, std::size_t cols, double bound, Rng& rng) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = rng.uniform(-bound, bound);
  return m;
}

Vector uniform_vector(std::size_t n, double bound, Rng& rng) {
  Vector v(n);
  for (double& e : v) e = rng.uniform(-bound, bound);
  return v;
}

struct AdamW {
  NlaeParams m, v;
  std::size_t step = 0;

  explicit AdamW(const NlaeParams& shape) : m(shape), v(shape) {
    m.for_each([](std::span<double> t) { std::fill(t.begin(), t.end(), 0.0); });
    v.for_each([](std::span<double> t) { std::fill(t.begin(), t.end(), 0.0); });
  }

  void update(NlaeParams& p, NlaeParams& g, const NlaeOptions& o) {
    ++step;
    const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(step));
    std::vector<std::span<double>> ps, gs, ms, vs;
    p.for_each([&](std::span<double> t) { ps.push_back(t); });
    g.for_each([&](std::span<double> t) { gs.push_back(t); });
    m.for_each([&](std::span<double> t) { ms.push_back(t); });
    v.for_each([&](std::span<double> t) { vs.push_back(t); });
    for (std::size_t t = 0; t < ps.size(); ++t) {
      for (std::size_t i = 0; i < ps[t].size(); ++i) {
        double& w = ps[t][i];
        const double gi = gs[t][i];
        w -= o.learning_rate * o.weight_decay * w;
        ms[t][i] = o.beta1 * ms[t][i] + (1.0 - o.beta1) * gi;
        vs[t][i] = o.beta2 * vs[t][i] + (1.0 - o.beta2) * gi * gi;
        const double mhat = ms[t][i] / c1;
        const double vhat = vs[t][i] / c2;
        w -= o.learning_rate * mhat / (std::sqrt(vhat) + o.adam_eps);
      }
    }
  }
};

}  // namespace

std::size_t hidden_width(std::size_t in_dims, std::size_t out_dims) noexcept {
  return static_cast<std::size_t>(std::lround(static_cast<double>(in_dims + out_dims) / 2.0));
}

NlaeParams init(std::size_t in_dims, std::size_t out_dims, std::uint64_t seed) {
  const std::size_t hidden = hidden_width(in_dims, out_dims);
  Rng rng(derive_seed(seed, "nlae-init"));
  const double b_in = 1.0 / std::sqrt(static_cast<double>(in_dims));
  const double b_hidden = 1.0 / std::sqrt(static_cast<double>(hidden));
  const double b_out = 1.0 / std::sqrt(static_cast<double>(out_dims));
  NlaeParams p;
  p.w1 = uniform_matrix(in_dims, hidden, b_in, rng);
  p.b1 = uniform_vector(hidden, b_in, rng);
  p.w2 = uniform_matrix(hidden, out_dims, b_hidden, rng);
  p.b2 = uniform_vector(out_dims, b_hidden, rng);
  p.dec_w2 = uniform_matrix(out_dims, hidden, b_out, rng);
  p.dec_b2 = uniform_vector(hidden, b_out, rng);
  p.dec_w1 = uniform_matrix(hidden, in_dims, b_hidden, rng);
  p.dec_b1 = uniform_vector(in_dims, b_hidden, rng);
  return p;
}

bool EarlyStopping::observe(double loss) {
  ++epoch_;
  improved_ = epoch_ == 1 || loss < best_;
  if (improved_) {
    best_ = loss;
    best_epoch_ = epoch_;
  }
  rises_ = (epoch_ > 1 && loss > last_) ? rises_ + 1 : 0;
  last_ = loss;
  return rises_ >= patience_;
}

Matrix encode(const NlaeParams& p, const Matrix& x) {
  if (x.cols() != p.in_dims()) throw ShapeError("nlae: input dims mismatch");
  Matrix h = linalg::multiply(x, p.w1);
  add_bias(h, p.b1);
  relu_inplace(h, nullptr);
  Matrix code = linalg::multiply(h, p.w2);
  add_bias(code, p.b2);
  relu_inplace(code, nullptr);
  return code;
}

Matrix reconstruct(const NlaeParams& p, const Matrix& x) {
  if (x.cols() != p.in_dims()) throw ShapeError("nlae: input dims mismatch");
  return forward(p, x, false).recon;
}

double loss(const NlaeParams& p, const Matrix& x) {
  const Matrix recon = reconstruct(p, x);
  return simd::squared_distance(recon.values(), x.values()) / static_cast<double>(x.size());
}

double loss_and_gradient(const NlaeParams& p, const Matrix& x, NlaeParams& grad) {
  if (x.cols() != p.in_dims()) throw ShapeError("nlae: input dims mismatch");
  Forward f = forward(p, x, true);
  const double scale = 2.0 / static_cast<double>(x.size());

  Matrix d_out = f.recon;  // d loss / d recon
  double total = 0.0;
  for (std::size_t i = 0; i < d_out.size(); ++i) {
    const double diff = d_out.data()[i] - x.data()[i];
    total += diff * diff;
    d_out.data()[i] = scale * diff;
  }

  grad.dec_w1 = linalg::multiply_tn(f.h3, d_out);
  grad.dec_b1 = column_sums(d_out);
  Matrix d_h3 = linalg::multiply_nt(d_out, p.dec_w1);
  hadamard(d_h3, f.mask3);
  grad.dec_w2 = linalg::multiply_tn(f.code, d_h3);
  grad.dec_b2 = column_sums(d_h3);
  Matrix d_code = linalg::multiply_nt(d_h3, p.dec_w2);
  hadamard(d_code, f.mask2);
  grad.w2 = linalg::multiply_tn(f.h1, d_code);
  grad.b2 = column_sums(d_code);
  Matrix d_h1 = linalg::multiply_nt(d_code, p.w2);
  hadamard(d_h1, f.mask1);
  grad.w1 = linalg::multiply_tn(x, d_h1);
  grad.b1 = column_sums(d_h1);
  return total / static_cast<double>(x.size());
}

NlaeFit fit(const Matrix& x, std::size_t k, const NlaeOptions& opts) {
  if (x.rows() < 10)
    throw ConfigError("nlae needs at least 10 rows for a validation split, got " +
                      std::to_string(x.rows()));
  if (k == 0 || k > x.cols())
    throw ConfigError("nlae: k=" + std::to_string(k) + " must be in [1, dims]");
  if (opts.batch_size == 0 || opts.max_epochs == 0)
    throw ConfigError("nlae: batch_size and max_epochs must be positive");

  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng(derive_seed(opts.seed, "nlae-split"));
  for (std::size_t i = order.size() - 1; i > 0; --i)
    std::swap(order[i], order[static_cast<std::size_t>(split_rng.below(i + 1))]);
  const std::size_t n_train = x.rows() * 9 / 10;
  std::vector<std::size_t> train_idx(order.begin(), order.begin() + static_cast<long>(n_train));
  std::vector<std::size_t> val_idx(order.begin() + static_cast<long>(n_train), order.end());
  const Matrix train = x.gather_rows(train_idx);
  const Matrix val = x.gather_rows(val_idx);

  NlaeFit out;
  NlaeParams params = init(x.cols(), k, opts.seed);
  NlaeParams grad = params;
  AdamW adam(params);
  EarlyStopping stopper(opts.patience);
  Rng shuffle_rng(derive_seed(opts.seed, "nlae-shuffle"));
  std::vector<std::size_t> perm(n_train);
  std::iota(perm.begin(), perm.end(), 0);

  for (std::size_t epoch = 1; epoch <= opts.max_epochs; ++epoch) {
    for (std::size_t i = perm.size() - 1; i > 0; --i)
      std::swap(perm[i], perm[static_cast<std::size_t>(shuffle_rng.below(i + 1))]);
    for (std::size_t start = 0; start < n_train; start += opts.batch_size) {
      const std::size_t end = std::min(start + opts.batch_size, n_train);
      const Matrix batch =
          train.gather_rows(std::span<const std::size_t>(perm.data() + start, end - start));
      const double batch_loss = loss_and_gradient(params, batch, grad);
      if (!std::isfinite(batch_loss)) throw NumericsError("nlae: loss is not finite", epoch);
      adam.update(params, grad, opts);
    }
    out.train_loss.push_back(loss(params, train));
    const double v = loss(params, val);
    out.validation_loss.push_back(v);
    out.epochs_run = epoch;
    const bool stop = stopper.observe(v);
    if (stopper.improved()) out.params = params;
    if (stop) break;
  }
  out.best_epoch = stopper.best_epoch();
  return out;
}

}  // namespace nlae
}  // namespace hlr
