// src/eval.cpp

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

#include "hlr/eval.hpp"

#include <algorithm>
#include <cmath>

#include "hlr/error.hpp"
#include "hlr/rng.hpp"

namespace hlr {

std::string_view to_string(CiMethod m) noexcept {
  return m == CiMethod::percentile ? "percentile" : "t";
}

CiMethod parse_ci_method(std::string_view s) {
  if (s == "t") return CiMethod::t;
  if (s == "percentile") return CiMethod::percentile;
  throw ConfigError("unknown CI method '" + std::string(s) + "'");
}

ReducedTask to_reduced_task(const TaskDataset& data, OutcomeKind kind) {
  data.validate();
  ReducedTask t;
  t.task_name = data.task_name;
  t.kind = kind;
  t.train_x = to_double(data.train_features.matrix);
  t.train_y = data.train_outcomes.values;
  t.test_x = to_double(data.test_features.matrix);
  t.test_y = data.test_outcomes.values;
  return t;
}

Standardizer Standardizer::fit(const Matrix& x) {
  Standardizer s;
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 1.0);
  if (n == 0) return s;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) s.mean[c] += x(r, c);
  for (double& m : s.mean) m /= static_cast<double>(n);
  Vector var(d, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const double diff = x(r, c) - s.mean[c];
      var[c] += diff * diff;
    }
  for (std::size_t c = 0; c < d; ++c) {
    const double sd = std::sqrt(var[c] / static_cast<double>(n));
    s.scale[c] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& x) const {
  if (x.cols() != mean.size()) throw ShapeError("standardizer: dims mismatch");
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = (x(r, c) - mean[c]) / scale[c];
  return out;
}

std::string metric_name(OutcomeKind kind, const ScoringOptions& opts) {
  if (kind != OutcomeKind::continuous) return "macro_f1";
  return opts.disattenuate ? "disattenuated_r" : "pearson_r";
}

double score_predictions(OutcomeKind kind, std::span<const double> y,
                         std::span<const double> yhat, const ScoringOptions& opts) {
  switch (kind) {
    case OutcomeKind::continuous: {
      const double r = pearson_r(y, yhat);
      return opts.disattenuate ? disattenuated_r(r, opts.r_xx, opts.r_yy) : r;
    }
    case OutcomeKind::binary:
      return macro_f1(y, yhat, 2);
    case OutcomeKind::multiclass4:
      return macro_f1(y, yhat, 4);
  }
  return 0.0;
}

void summarize(BootstrapResult& result, CiMethod ci, double confidence) {
  result.mean = mean(result.scores);
  result.std_error = standard_error(result.scores);
  const Interval iv = ci == CiMethod::t ? confidence_interval(result.scores, confidence)
                                        : percentile_interval(result.scores, confidence);
  result.ci_low = std::min(iv.low, result.mean);
  result.ci_high = std::max(iv.high, result.mean);
}

namespace {

std::vector<std::size_t> draw(std::size_t n_ta, std::size_t pool, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> idx(n_ta);
  for (auto& i : idx) i = static_cast<std::size_t>(rng.below(pool));
  return idx;
}

bool single_class(const Vector& y, std::span<const std::size_t> idx) {
  for (std::size_t i : idx)
    if (y[i] != y[idx.front()]) return false;
  return true;
}

}  // namespace

double bootstrap_replicate(const ReducedTask& data, const BootstrapOptions& opts,
                           std::size_t replicate, bool* redrawn) {
  const std::uint64_t seed = derive_seed(opts.seed, replicate);
  auto idx = draw(opts.n_ta, data.train_x.rows(), seed);
  const bool classification = data.kind != OutcomeKind::continuous;
  if (redrawn) *redrawn = false;
  if (classification && single_class(data.train_y, idx)) {
    idx = draw(opts.n_ta, data.train_x.rows(), derive_seed(seed, "redraw"));
    if (redrawn) *redrawn = true;
    if (single_class(data.train_y, idx))
      throw DegenerateSampleError(data.task_name + ": replicate " + std::to_string(replicate) +
                                  " drew a single class twice (n_ta=" +
                                  std::to_string(opts.n_ta) + ")");
  }

  const Matrix sample = data.train_x.gather_rows(idx);
  Vector y(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) y[i] = data.train_y[idx[i]];

  const Standardizer z = Standardizer::fit(sample);
  const LinearModel model = train(z.apply(sample), y, model_kind_for(data.kind), opts.model);
  const auto yhat = predict(model, z.apply(data.test_x));
  return score_predictions(data.kind, data.test_y, yhat, opts.scoring);
}

BootstrapResult bootstrap_eval(const ReducedTask& data, const BootstrapOptions& opts) {
  if (opts.n_ta == 0) throw ConfigError("bootstrap_eval: n_ta must be >= 1");
  if (opts.replicates < 2) throw ConfigError("bootstrap_eval: need at least 2 replicates");
  if (data.train_x.rows() == 0) throw DataError(data.task_name + ": empty training set");
  if (data.train_x.rows() != data.train_y.size() || data.test_x.rows() != data.test_y.size())
    throw ShapeError(data.task_name + ": features and outcomes differ in length");
  if (data.train_x.cols() != data.test_x.cols())
    throw ShapeError(data.task_name + ": train and test dims differ");

  BootstrapResult r;
  r.task_name = data.task_name;
  r.k = data.train_x.cols();
  r.n_ta = opts.n_ta;
  r.seed = opts.seed;
  r.model = opts.model;
  r.ci = opts.ci;
  r.metric = metric_name(data.kind, opts.scoring);
  r.scores.resize(opts.replicates);
  for (std::size_t i = 0; i < opts.replicates; ++i) {
    bool redrawn = false;
    r.scores[i] = bootstrap_replicate(data, opts, i + 1, &redrawn);
    r.redrawn += redrawn ? 1 : 0;
  }
  summarize(r, opts.ci, opts.confidence);
  return r;
}

}  // namespace hlr
