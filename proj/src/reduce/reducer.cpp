// src/reduce/reducer.cpp

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

#include "hlr/reduce/reducer.hpp"

#include "hlr/error.hpp"

namespace hlr {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::pca:
      return "pca";
    case Method::pca_ppa:
      return "pca_ppa";
    case Method::nmf:
      return "nmf";
    case Method::fa:
      return "fa";
    case Method::nlae:
      return "nlae";
  }
  return "pca";
}

Method parse_method(std::string_view s) {
  if (s == "pca") return Method::pca;
  if (s == "pca_ppa" || s == "pca-ppa") return Method::pca_ppa;
  if (s == "nmf") return Method::nmf;
  if (s == "fa") return Method::fa;
  if (s == "nlae") return Method::nlae;
  throw ConfigError("unknown reduction method '" + std::string(s) + "'");
}

ReducerModel fit_pca(const Matrix& x, std::size_t k, const PcaOptions& opts) {
  ReducerModel m;
  m.method = Method::pca;
  m.in_dims = x.cols();
  m.out_dims = k;
  auto p = pca::fit(x, k, opts);
  double captured = 0.0;
  for (double s : p.singular_values) captured += s * s;
  m.meta = {x.rows(), opts.seed, 1, captured, 0};
  m.params = std::move(p);
  return m;
}

ReducerModel fit_pca_ppa(const Matrix& x, std::size_t k, const PcaOptions& opts) {
  if (k == 0) throw ConfigError("pca_ppa: k must be >= 1");
  if (x.rows() < 2 || k > std::min(x.rows() - 1, x.cols()))
    throw ConfigError("pca_ppa: k=" + std::to_string(k) + " exceeds min(rows-1, dims)");
  PcaPpaParams p;
  p.pre = pca::fit_ppa(x, pca::ppa_removed_for(x.cols()), opts);
  const Matrix stage1 = pca::apply_ppa(p.pre, x);
  p.pca = pca::fit(stage1, k, opts);
  const Matrix stage2 = pca::apply(p.pca, stage1);
  p.post = pca::fit_ppa(stage2, pca::ppa_removed_for(k), opts);

  ReducerModel m;
  m.method = Method::pca_ppa;
  m.in_dims = x.cols();
  m.out_dims = k;
  double captured = 0.0;
  for (double s : p.pca.singular_values) captured += s * s;
  m.meta = {x.rows(), opts.seed, 1, captured, 0};
  m.params = std::move(p);
  return m;
}

ReducerModel fit_nmf(const Matrix& x, std::size_t k, const NmfOptions& opts) {
  auto fit = nmf::fit(x, k, opts);
  ReducerModel m;
  m.method = Method::nmf;
  m.in_dims = x.cols();
  m.out_dims = k;
  m.meta = {x.rows(), opts.seed, opts.iterations, fit.objective.back(), 0};
  m.params = std::move(fit.params);
  return m;
}

ReducerModel fit_fa(const Matrix& x, std::size_t k, const FaOptions& opts) {
  auto fit = fa::fit(x, k, opts);
  ReducerModel m;
  m.method = Method::fa;
  m.in_dims = x.cols();
  m.out_dims = k;
  m.meta = {x.rows(), 0, fit.iterations, fit.log_likelihood.back(), fit.clamped};
  m.params = std::move(fit.params);
  return m;
}

ReducerModel fit_nlae(const Matrix& x, std::size_t k, const NlaeOptions& opts) {
  auto fit = nlae::fit(x, k, opts);
  ReducerModel m;
  m.method = Method::nlae;
  m.in_dims = x.cols();
  m.out_dims = k;
  m.meta = {x.rows(), opts.seed, fit.epochs_run, fit.validation_loss[fit.best_epoch - 1], 0};
  m.params = std::move(fit.params);
  return m;
}

ReducerModel fit_reducer(Method method, const Matrix& x, std::size_t k, std::uint64_t seed,
                         const ReducerOptions& opts) {
  switch (method) {
    case Method::pca: {
      auto o = opts.pca;
      o.seed = seed;
      return fit_pca(x, k, o);
    }
    case Method::pca_ppa: {
      auto o = opts.pca;
      o.seed = seed;
      return fit_pca_ppa(x, k, o);
    }
    case Method::nmf: {
      auto o = opts.nmf;
      o.seed = seed;
      return fit_nmf(x, k, o);
    }
    case Method::fa: {
      auto m = fit_fa(x, k, opts.fa);
      m.meta.seed = seed;
      return m;
    }
    case Method::nlae: {
      auto o = opts.nlae;
      o.seed = seed;
      return fit_nlae(x, k, o);
    }
  }
  throw ConfigError("unknown reduction method");
}

namespace {

struct Apply {
  const Matrix& x;

  Matrix operator()(const PcaParams& p) const { return pca::apply(p, x); }
  Matrix operator()(const PcaPpaParams& p) const {
    return pca::apply_ppa(p.post, pca::apply(p.pca, pca::apply_ppa(p.pre, x)));
  }
  Matrix operator()(const NmfParams& p) const { return nmf::project(p, x); }
  Matrix operator()(const FaParams& p) const { return fa::posterior_means(p, x); }
  Matrix operator()(const NlaeParams& p) const { return nlae::encode(p, x); }
};

}  // namespace

Matrix transform(const ReducerModel& model, const Matrix& x) {
  if (x.cols() != model.in_dims)
    throw ShapeError("reducer expects " + std::to_string(model.in_dims) + " dims, input has " +
                     std::to_string(x.cols()));
  if (x.rows() == 0) return Matrix(0, model.out_dims);
  return std::visit(Apply{x}, model.params);
}

EmbeddingTable transform(const ReducerModel& model, const EmbeddingTable& table) {
  EmbeddingTable out;
  out.ids = table.ids;
  out.level = table.level;
  out.group_keys = table.group_keys;
  out.matrix = transform(model, to_double(table.matrix)).cast<float>();
  return out;
}

}  // namespace hlr
