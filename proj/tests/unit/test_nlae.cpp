// tests/unit/test_nlae.cpp

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

#include <algorithm>
#include <cmath>

#include "hlr/error.hpp"
#include "hlr/reduce/nlae.hpp"
#include "support/synthetic.hpp"

using namespace hlr;

namespace {

std::vector<double*> flat(NlaeParams& p) {
  std::vector<double*> out;
  p.for_each([&](std::span<double> t) {
    for (double& v : t) out.push_back(&v);
  });
  return out;
}

}  // namespace

TEST_CASE("hidden width generalizes 768 -> 128") {
  CHECK(nlae::hidden_width(768, 128) == 448);
  CHECK(nlae::hidden_width(4, 2) == 3);
  const auto p = nlae::init(10, 4, 1);
  CHECK(p.w1.rows() == 10);
  CHECK(p.w1.cols() == 7);
  CHECK(p.w2.rows() == 7);
  CHECK(p.w2.cols() == 4);
  CHECK(p.dec_w2.rows() == 4);
  CHECK(p.dec_w2.cols() == 7);
  CHECK(p.dec_w1.rows() == 7);
  CHECK(p.dec_w1.cols() == 10);
  CHECK(p.b1.size() == 7);
  CHECK(p.b2.size() == 4);
  CHECK(p.dec_b2.size() == 7);
  CHECK(p.dec_b1.size() == 10);
}

TEST_CASE("analytic gradient matches central differences") {
  Rng rng(21);
  const Matrix x = testing::random_normal(5, 4, rng);
  for (std::uint64_t seed : {1, 2, 3}) {
    NlaeParams p = nlae::init(4, 2, seed);
    NlaeParams grad;
    nlae::loss_and_gradient(p, x, grad);
    auto params = flat(p);
    auto g = flat(grad);
    REQUIRE(params.size() == g.size());
    const double h = 1e-6;
    double worst = 0;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double saved = *params[i];
      *params[i] = saved + h;
      const double up = nlae::loss(p, x);
      *params[i] = saved - h;
      const double down = nlae::loss(p, x);
      *params[i] = saved;
      const double fd = (up - down) / (2 * h);
      const double scale = std::max(std::abs(fd), std::abs(*g[i]));
      // Parameters behind a dead unit have zero gradient on both sides.
      if (scale < 1e-9) continue;
      worst = std::max(worst, std::abs(fd - *g[i]) / scale);
    }
    CAPTURE(seed);
    CHECK(worst <= 1e-4);
  }
}

TEST_CASE("early stopping trace") {
  nlae::EarlyStopping stop(3);
  const double trace[] = {3, 2, 2.1, 2.2, 2.3};
  std::size_t stopped_at = 0;
  for (std::size_t e = 0; e < 5; ++e)
    if (stop.observe(trace[e])) {
      stopped_at = e + 1;
      break;
    }
  CHECK(stopped_at == 5);
  CHECK(stop.best_epoch() == 2);
  CHECK(stop.best_loss() == 2.0);

  nlae::EarlyStopping reset(3);
  for (double v : {3.0, 2.0, 2.1, 2.2, 1.9, 2.0, 2.1}) CHECK_FALSE(reset.observe(v));
  CHECK(reset.best_epoch() == 5);
}

TEST_CASE("fit stops by the rule and returns the best epoch") {
  Rng rng(4);
  const Matrix x = testing::random_normal(60, 6, rng);
  NlaeOptions opts;
  opts.seed = 11;
  opts.max_epochs = 40;
  const auto f = nlae::fit(x, 3, opts);
  REQUIRE(f.validation_loss.size() == f.epochs_run);
  nlae::EarlyStopping replay(opts.patience);
  std::size_t stop = 0;
  for (std::size_t e = 0; e < f.validation_loss.size(); ++e)
    if (replay.observe(f.validation_loss[e])) {
      stop = e + 1;
      break;
    }
  if (stop) CHECK(stop == f.epochs_run);
  else CHECK(f.epochs_run == opts.max_epochs);
  CHECK(f.best_epoch == replay.best_epoch());

  const auto again = nlae::fit(x, 3, opts);
  CHECK(again.params.w1 == f.params.w1);
  CHECK(again.validation_loss == f.validation_loss);
}

TEST_CASE("ten rows with k = dims can be overfit") {
  // At width 4 a ReLU unit that is dead on all ten rows never recovers and
  // the loss plateaus near 5e-3; eight dims leave enough live units.
  Rng rng(6);
  Matrix x = testing::random_uniform(10, 8, rng);
  NlaeOptions opts;
  opts.seed = 1;
  opts.weight_decay = 0.0;
  opts.max_epochs = 20000;
  opts.patience = 20000;
  opts.learning_rate = 1e-3;
  const auto f = nlae::fit(x, 8, opts);
  CHECK(f.train_loss.back() < 1e-3);
}

TEST_CASE("input checks") {
  Rng rng(1);
  CHECK_THROWS_AS(nlae::fit(testing::random_normal(5, 4, rng), 2), ConfigError);
  CHECK_THROWS_AS(nlae::fit(testing::random_normal(20, 4, rng), 5), ConfigError);
  CHECK_THROWS_AS(nlae::fit(testing::random_normal(20, 4, rng), 0), ConfigError);
}
