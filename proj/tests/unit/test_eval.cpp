// tests/unit/test_eval.cpp

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

#include <doctest.h>

#include <cmath>

#include "hlr/error.hpp"
#include "hlr/eval.hpp"
#include "hlr/metrics.hpp"
#include "support/synthetic.hpp"

using namespace hlr;

namespace {

ReducedTask linear_task(std::size_t n_train, std::size_t n_test, std::size_t dims,
                        std::uint64_t seed, OutcomeKind kind = OutcomeKind::continuous) {
  Rng rng(seed);
  ReducedTask t;
  t.task_name = "synthetic";
  t.kind = kind;
  std::vector<double> w(dims);
  for (auto& v : w) v = rng.normal();
  auto fill = [&](Matrix& x, Vector& y, std::size_t n) {
    x = testing::random_normal(n, dims, rng);
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.5 * rng.normal();
      for (std::size_t j = 0; j < dims; ++j) s += w[j] * x(i, j);
      y[i] = kind == OutcomeKind::binary ? (s > 0 ? 1.0 : 0.0) : s;
    }
  };
  fill(t.train_x, t.train_y, n_train);
  fill(t.test_x, t.test_y, n_test);
  return t;
}

}  // namespace

TEST_CASE("bootstrap is deterministic and self-consistent") {
  const auto task = linear_task(200, 100, 5, 1);
  BootstrapOptions opts;
  opts.n_ta = 50;
  opts.seed = 99;
  const auto a = bootstrap_eval(task, opts);
  const auto b = bootstrap_eval(task, opts);
  CHECK(a.scores == b.scores);
  CHECK(a.mean == b.mean);
  CHECK(a.ci_low == b.ci_low);
  REQUIRE(a.scores.size() == 10);
  CHECK(a.mean == mean(a.scores));
  CHECK(a.std_error == standard_error(a.scores));
  const auto ci = confidence_interval(a.scores);
  CHECK(a.ci_low == ci.low);
  CHECK(a.ci_high == ci.high);
  CHECK(a.ci_low <= a.mean);
  CHECK(a.mean <= a.ci_high);
  CHECK(a.metric == "pearson_r");
  CHECK(a.k == 5);

  // Each replicate depends only on its own index.
  for (std::size_t i = 0; i < 10; ++i) CHECK(bootstrap_replicate(task, opts, i + 1) == a.scores[i]);

  opts.seed = 100;
  CHECK(bootstrap_eval(task, opts).scores != a.scores);
}

TEST_CASE("constant test outcomes with a zero model give a degenerate interval") {
  auto task = linear_task(60, 30, 3, 2, OutcomeKind::binary);
  for (auto& y : task.test_y) y = 0.0;
  BootstrapOptions opts;
  opts.n_ta = 20;
  opts.seed = 5;
  opts.model.eta = 0.0;  // theta stays at zero
  const auto r = bootstrap_eval(task, opts);
  for (double s : r.scores) CHECK(s == r.scores[0]);
  CHECK(r.std_error == 0.0);
  CHECK(r.ci_low == r.mean);
  CHECK(r.ci_high == r.mean);
  CHECK(r.mean == 0.5);  // class 0 perfect, class 1 absent
}

TEST_CASE("full-size bootstrap stays close to the full-sample fit") {
  const auto task = linear_task(300, 300, 4, 8);
  BootstrapOptions opts;
  opts.n_ta = task.train_x.rows();
  opts.seed = 12;
  const auto r = bootstrap_eval(task, opts);

  const Standardizer z = Standardizer::fit(task.train_x);
  const auto model = train(z.apply(task.train_x), task.train_y, ModelKind::ridge, opts.model);
  const double full = pearson_r(task.test_y, predict(model, z.apply(task.test_x)));
  // Resampling with replacement leaves about a third of the rows out, so the
  // bootstrap mean sits slightly below the full fit.
  CHECK(std::abs(r.mean - full) < 0.02);
}

TEST_CASE("single-class samples are redrawn once, then rejected") {
  auto task = linear_task(100, 20, 2, 3, OutcomeKind::binary);
  for (auto& y : task.train_y) y = 0.0;
  task.train_y[0] = 1.0;
  BootstrapOptions opts;
  opts.n_ta = 3;
  opts.seed = 1;
  CHECK_THROWS_AS(bootstrap_eval(task, opts), DegenerateSampleError);

  // With a balanced pool a tiny sample occasionally needs a redraw.
  auto balanced = linear_task(100, 40, 2, 4, OutcomeKind::binary);
  opts.n_ta = 2;
  std::size_t redrawn = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    opts.seed = s;
    try {
      redrawn += bootstrap_eval(balanced, opts).redrawn;
    } catch (const DegenerateSampleError&) {
    }
  }
  CHECK(redrawn > 0);
}

TEST_CASE("standardizer uses sample statistics") {
  const Matrix x(4, 2, std::vector<double>{1, 5, 2, 5, 3, 5, 4, 5});
  const auto z = Standardizer::fit(x);
  CHECK(z.mean[0] == 2.5);
  CHECK(z.scale[0] == doctest::Approx(std::sqrt(1.25)));
  CHECK(z.scale[1] == 1.0);  // constant column is only centered
  const Matrix y = z.apply(x);
  CHECK(y(0, 1) == 0.0);
  CHECK(y(3, 0) == doctest::Approx(1.5 / std::sqrt(1.25)));
}

TEST_CASE("scoring per kind") {
  ScoringOptions plain, dis;
  dis.disattenuate = true;
  const std::vector<double> y{1, 2, 3, 4}, p{1, 2, 4, 3};
  CHECK(score_predictions(OutcomeKind::continuous, y, p, plain) == doctest::Approx(0.8));
  CHECK(score_predictions(OutcomeKind::continuous, y, p, dis) == doctest::Approx(disattenuated_r(0.8)));
  CHECK(score_predictions(OutcomeKind::binary, std::vector<double>{0, 0, 1, 1},
                          std::vector<double>{0, 0, 0, 0}, plain) == 1.0 / 3.0);
  CHECK(metric_name(OutcomeKind::multiclass4, plain) == "macro_f1");
  CHECK(metric_name(OutcomeKind::continuous, dis) == "disattenuated_r");
}

TEST_CASE("bootstrap input checks") {
  const auto task = linear_task(10, 5, 2, 1);
  BootstrapOptions opts;
  opts.n_ta = 0;
  CHECK_THROWS_AS(bootstrap_eval(task, opts), ConfigError);
  opts.n_ta = 5;
  opts.replicates = 1;
  CHECK_THROWS_AS(bootstrap_eval(task, opts), ConfigError);
  CHECK(parse_ci_method("percentile") == CiMethod::percentile);
  CHECK_THROWS_AS(parse_ci_method("bca"), ConfigError);
}

TEST_CASE("percentile interval option") {
  const auto task = linear_task(100, 50, 3, 6);
  BootstrapOptions opts;
  opts.n_ta = 30;
  opts.seed = 4;
  opts.ci = CiMethod::percentile;
  const auto r = bootstrap_eval(task, opts);
  const auto pi = percentile_interval(r.scores);
  CHECK(r.ci_low == pi.low);
  CHECK(r.ci_high == pi.high);
}
