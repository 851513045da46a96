// src/linmod.cpp

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

#include "hlr/linmod.hpp"

#include <cmath>

#include "hlr/error.hpp"
#include "hlr/simd/kernels.hpp"

namespace hlr {

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::ridge:
      return "ridge";
    case ModelKind::logistic:
      return "logistic";
    case ModelKind::multinomial4:
      return "multinomial4_ovr";
  }
  return "ridge";
}

ModelKind model_kind_for(OutcomeKind kind) noexcept {
  switch (kind) {
    case OutcomeKind::binary:
      return ModelKind::logistic;
    case OutcomeKind::multiclass4:
      return ModelKind::multinomial4;
    case OutcomeKind::continuous:
      break;
  }
  return ModelKind::ridge;
}

std::size_t class_count(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::logistic:
      return 2;
    case ModelKind::multinomial4:
      return 4;
    case ModelKind::ridge:
      break;
  }
  return 0;
}

namespace linmod {
namespace {

double score(std::span<const double> row, std::span<const double> theta) {
  return theta[0] + simd::dot(row, theta.subspan(1));
}

// log(1 + e^s) without overflow.
double softplus(double s) noexcept {
  return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
}

}  // namespace

double sigmoid(double s) noexcept {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

double loss(const Matrix& x, std::span<const double> y, std::span<const double> theta,
            ModelKind head_kind, double lambda, bool fit_intercept) {
  const auto n = static_cast<double>(x.rows());
  const auto w = theta.subspan(1);
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double s = fit_intercept ? score(x.row(i), theta) : simd::dot(x.row(i), w);
    if (head_kind == ModelKind::ridge) {
      const double r = s - y[i];
      total += 0.5 * r * r;
    } else {
      total += softplus(s) - y[i] * s;
    }
  }
  total += 0.5 * lambda * simd::dot(w, w);
  return total / n;
}

std::vector<double> gradient(const Matrix& x, std::span<const double> y,
                             std::span<const double> theta, ModelKind head_kind, double lambda,
                             bool fit_intercept) {
  const auto n = static_cast<double>(x.rows());
  const auto w = theta.subspan(1);
  std::vector<double> g(theta.size(), 0.0);
  std::span<double> gw(g.data() + 1, w.size());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double s = fit_intercept ? score(x.row(i), theta) : simd::dot(x.row(i), w);
    const double r = head_kind == ModelKind::ridge ? s - y[i] : sigmoid(s) - y[i];
    if (fit_intercept) g[0] += r;
    simd::axpy(r, x.row(i), gw);
  }
  simd::axpy(lambda, w, gw);
  for (double& v : g) v /= n;
  return g;
}

}  // namespace linmod

LinearModel train(const Matrix& x, std::span<const double> y, ModelKind kind,
                  const TrainConfig& config) {
  if (x.rows() == 0) throw DataError("train: no rows");
  if (y.size() != x.rows())
    throw ShapeError("train: " + std::to_string(y.size()) + " targets for " +
                     std::to_string(x.rows()) + " rows");
  if (config.iterations == 0) throw ConfigError("train: iterations must be >= 1");
  if (config.lambda < 0.0 || config.eta < 0.0)
    throw ConfigError("train: lambda and eta must be nonnegative");
  const std::size_t classes = class_count(kind);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) throw DataError("train: non-finite target", i);
    if (classes && (y[i] < 0.0 || y[i] >= static_cast<double>(classes) || y[i] != std::floor(y[i])))
      throw DataError("train: label outside [0, " + std::to_string(classes) + ")", i);
  }

  LinearModel model;
  model.kind = kind;
  model.config = config;
  model.n_features = x.cols();
  const std::size_t heads = kind == ModelKind::multinomial4 ? 4 : 1;
  model.theta = Matrix(heads, x.cols() + 1, 0.0);

  const ModelKind head_kind = kind == ModelKind::ridge ? ModelKind::ridge : ModelKind::logistic;
  std::vector<double> target(y.size());
  for (std::size_t h = 0; h < heads; ++h) {
    for (std::size_t i = 0; i < y.size(); ++i)
      target[i] = kind == ModelKind::multinomial4 ? (y[i] == static_cast<double>(h) ? 1.0 : 0.0)
                                                  : y[i];
    auto theta = model.theta.row(h);
    for (std::size_t t = 1; t <= config.iterations; ++t) {
      const auto g = linmod::gradient(x, target, theta, head_kind, config.lambda,
                                      config.fit_intercept);
      for (double v : g)
        if (!std::isfinite(v)) throw NumericsError("train: non-finite gradient", t);
      simd::axpy(-config.eta, g, theta);
    }
  }
  return model;
}

Matrix decision_scores(const LinearModel& model, const Matrix& x) {
  if (x.cols() != model.n_features)
    throw ShapeError("predict: model has " + std::to_string(model.n_features) +
                     " features, input has " + std::to_string(x.cols()));
  Matrix out(x.rows(), model.theta.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t h = 0; h < model.theta.rows(); ++h) {
      auto theta = model.theta.row(h);
      out(i, h) = theta[0] + simd::dot(x.row(i), theta.subspan(1));
    }
  return out;
}

std::vector<double> predict(const LinearModel& model, const Matrix& x) {
  const Matrix scores = decision_scores(model, x);
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    switch (model.kind) {
      case ModelKind::ridge:
        out[i] = scores(i, 0);
        break;
      case ModelKind::logistic:
        out[i] = scores(i, 0) > 0.0 ? 1.0 : 0.0;
        break;
      case ModelKind::multinomial4: {
        // Sigmoid is monotone, so comparing raw scores picks the same head
        // without saturating near probability 1.
        std::size_t best = 0;
        for (std::size_t h = 1; h < scores.cols(); ++h)
          if (scores(i, h) > scores(i, best)) best = h;
        out[i] = static_cast<double>(best);
        break;
      }
    }
  }
  return out;
}

}  // namespace hlr
