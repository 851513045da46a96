// include/hlr/linmod.hpp

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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hlr/corpus.hpp"
#include "hlr/matrix.hpp"

namespace hlr {

enum class ModelKind { ridge, logistic, multinomial4 };

std::string_view to_string(ModelKind kind) noexcept;
/// continuous -> ridge, binary -> logistic, multiclass4 -> multinomial4.
ModelKind model_kind_for(OutcomeKind kind) noexcept;
std::size_t class_count(ModelKind kind) noexcept;  ///< 0 for ridge

struct TrainConfig {
  double lambda = 1.0;
  double eta = 0.01;
  std::size_t iterations = 100;
  bool fit_intercept = true;
};

/// Objectives minimized by full-batch gradient descent, per head:
///
///   ridge     (1/2n) (||X w + b - y||^2 + lambda ||w||^2)
///   logistic  (1/n)  (sum_i log(1 + e^{s_i}) - y_i s_i + (lambda/2) ||w||^2)
///
/// The intercept b is never penalized, so the ridge optimum is
/// (X^T X + lambda I)^-1 X^T y on the (centered) design.
/// multinomial4 trains four one-vs-rest logistic heads.
struct LinearModel {
  ModelKind kind = ModelKind::ridge;
  TrainConfig config;
  std::size_t n_features = 0;
  /// One row per head: [intercept, w_1..w_k]. The intercept slot is zero
  /// when fit_intercept is off.
  Matrix theta;
};

namespace linmod {

/// Loss of one head with parameters `theta` ([b, w...]) on targets `y`.
double loss(const Matrix& x, std::span<const double> y, std::span<const double> theta,
            ModelKind head_kind, double lambda, bool fit_intercept);
/// Gradient of `loss` with respect to theta (same layout).
std::vector<double> gradient(const Matrix& x, std::span<const double> y,
                             std::span<const double> theta, ModelKind head_kind, double lambda,
                             bool fit_intercept);

double sigmoid(double s) noexcept;

}  // namespace linmod

/// theta starts at zero and takes exactly config.iterations steps. Throws
/// NumericsError with the iteration index if the gradient turns non-finite.
LinearModel train(const Matrix& x, std::span<const double> y, ModelKind kind,
                  const TrainConfig& config = {});

/// Per-head linear scores, n x heads.
Matrix decision_scores(const LinearModel& model, const Matrix& x);

/// Ridge: real-valued predictions. Classifiers: predicted class as a double.
/// Binary predicts 1 only when P(y=1) > 0.5; multinomial4 takes the argmax
/// of the head probabilities. Ties go to the lowest class index.
std::vector<double> predict(const LinearModel& model, const Matrix& x);

}  // namespace hlr
