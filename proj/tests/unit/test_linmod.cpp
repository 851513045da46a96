// tests/unit/test_linmod.cpp

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
#include "hlr/linalg.hpp"
#include "hlr/linmod.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace hlr;

namespace {

// (X^T X + lambda I)^-1 X^T y on a centered design; the intercept is then
// mean(y) - mean(x) . w.
std::vector<double> ridge_closed_form(const Matrix& x, const std::vector<double>& y, double lambda) {
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<double> mx(d, 0.0);
  double my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    my += y[i];
    for (std::size_t j = 0; j < d; ++j) mx[j] += x(i, j);
  }
  my /= n;
  for (double& m : mx) m /= n;
  Matrix a(d, d);
  std::vector<double> b(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < d; ++p) {
      b[p] += (x(i, p) - mx[p]) * (y[i] - my);
      for (std::size_t q = 0; q < d; ++q) a(p, q) += (x(i, p) - mx[p]) * (x(i, q) - mx[q]);
    }
  for (std::size_t p = 0; p < d; ++p) a(p, p) += lambda;
  const auto w = testing::gauss_solve(a, b);
  std::vector<double> theta{my};
  for (std::size_t p = 0; p < d; ++p) theta[0] -= mx[p] * w[p];
  theta.insert(theta.end(), w.begin(), w.end());
  return theta;
}

}  // namespace

TEST_CASE("ridge on the identity design converges to y") {
  const Matrix x(2, 2, std::vector<double>{1, 0, 0, 1});
  TrainConfig cfg{0.0, 0.5, 2000, false};
  const auto m = train(x, std::vector<double>{1, 2}, ModelKind::ridge, cfg);
  CHECK(std::abs(m.theta(0, 1) - 1.0) <= 1e-6);
  CHECK(std::abs(m.theta(0, 2) - 2.0) <= 1e-6);
  CHECK(m.theta(0, 0) == 0.0);
}

TEST_CASE("gradient descent ridge matches the closed form") {
  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix x = testing::random_normal(20, 3, rng);
    std::vector<double> y(20);
    for (auto& v : y) v = rng.normal() * 2 + 1;
    const double lambda = 0.5 + trial;
    TrainConfig cfg{lambda, 0.5, 5000, true};
    const auto m = train(x, y, ModelKind::ridge, cfg);
    const auto oracle = ridge_closed_form(x, y, lambda);
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(m.theta(0, j) - oracle[j]) <= 1e-6);
  }
}

TEST_CASE("ridge loss is monotone for a small step") {
  Rng rng(3);
  const Matrix x = testing::random_normal(30, 4, rng);
  std::vector<double> y(30);
  for (auto& v : y) v = rng.normal();
  double prev = INFINITY;
  for (std::size_t t = 1; t <= 40; ++t) {
    const auto m = train(x, y, ModelKind::ridge, {0.0, 0.05, t, true});
    const double l = linmod::loss(x, y, m.theta.row(0), ModelKind::ridge, 0.0, true);
    CHECK(l <= prev + 1e-15);
    prev = l;
  }
}

TEST_CASE("separable logistic fixture") {
  const Matrix x(2, 1, std::vector<double>{-1, 1});
  const std::vector<double> y{0, 1};
  const auto m = train(x, y, ModelKind::logistic, {0.0, 0.1, 100, true});
  CHECK(m.theta(0, 1) > 0);
  CHECK(predict(m, x) == std::vector<double>{0, 1});
}

TEST_CASE("loss gradients match central differences") {
  Rng rng(19);
  for (auto kind : {ModelKind::ridge, ModelKind::logistic}) {
    for (bool intercept : {true, false}) {
      const Matrix x = testing::random_normal(10, 4, rng);
      std::vector<double> y(10), theta(5);
      for (auto& v : y) v = kind == ModelKind::ridge ? rng.normal() : (rng.uniform() < 0.5 ? 0 : 1);
      for (auto& v : theta) v = rng.normal();
      if (!intercept) theta[0] = 0;
      const auto g = linmod::gradient(x, y, theta, kind, 0.7, intercept);
      for (std::size_t j = intercept ? 0 : 1; j < 5; ++j) {
        auto up = theta, down = theta;
        const double h = 1e-6;
        up[j] += h;
        down[j] -= h;
        const double fd = (linmod::loss(x, y, up, kind, 0.7, intercept) -
                           linmod::loss(x, y, down, kind, 0.7, intercept)) / (2 * h);
        CHECK(std::abs(fd - g[j]) <= 1e-6 * std::max(1.0, std::abs(g[j])));
      }
      if (!intercept) CHECK(g[0] == 0.0);
    }
  }
}

TEST_CASE("predictions and tie rule") {
  LinearModel ridge{ModelKind::ridge, {}, 1, Matrix(1, 2, std::vector<double>{0, 1})};
  CHECK(predict(ridge, Matrix(1, 1, std::vector<double>{5}))[0] == 5.0);

  LinearModel zero_r{ModelKind::ridge, {}, 2, Matrix(1, 3)};
  CHECK(predict(zero_r, Matrix(3, 2, 1.0)) == std::vector<double>{0, 0, 0});
  LinearModel zero_l{ModelKind::logistic, {}, 2, Matrix(1, 3)};
  CHECK(predict(zero_l, Matrix(3, 2, 1.0)) == std::vector<double>{0, 0, 0});
  LinearModel zero_m{ModelKind::multinomial4, {}, 2, Matrix(4, 3)};
  CHECK(predict(zero_m, Matrix(2, 2, 1.0)) == std::vector<double>{0, 0});

  // Heads scoring (0.1, 0.9, 0.2, 0.2) through their intercepts.
  LinearModel heads{ModelKind::multinomial4, {}, 1,
                    Matrix(4, 2, std::vector<double>{0.1, 0, 0.9, 0, 0.2, 0, 0.2, 0})};
  CHECK(predict(heads, Matrix(1, 1, std::vector<double>{3}))[0] == 1.0);
  CHECK_THROWS_AS(predict(heads, Matrix(1, 2)), ShapeError);
}

TEST_CASE("predict is a row-wise map") {
  Rng rng(7);
  const Matrix x = testing::random_normal(12, 3, rng);
  std::vector<double> y(12);
  for (std::size_t i = 0; i < 12; ++i) y[i] = static_cast<double>(i % 4);
  const auto m = train(x, y, ModelKind::multinomial4, {});
  const auto p = predict(m, x);
  std::vector<std::size_t> rev(12);
  for (std::size_t i = 0; i < 12; ++i) rev[i] = 11 - i;
  const auto pr = predict(m, x.gather_rows(rev));
  for (std::size_t i = 0; i < 12; ++i) CHECK(pr[i] == p[11 - i]);
}

TEST_CASE("diverging training reports the iteration") {
  const Matrix x(2, 1, std::vector<double>{1e200, -1e200});
  try {
    train(x, std::vector<double>{1, -1}, ModelKind::ridge, {0.0, 10.0, 100, true});
    FAIL("expected NumericsError");
  } catch (const NumericsError& e) {
    CHECK(e.iteration() >= 1);
  }
}

TEST_CASE("training validates labels") {
  const Matrix x(2, 1, std::vector<double>{1, 2});
  CHECK_THROWS_AS(train(x, std::vector<double>{0, 2}, ModelKind::logistic), DataError);
  CHECK_THROWS_AS(train(x, std::vector<double>{0, 1, 1}, ModelKind::ridge), ShapeError);
  CHECK_THROWS_AS(train(x, std::vector<double>{0, 1}, ModelKind::ridge, {1.0, 0.01, 0, true}), ConfigError);
}
