// include/hlr/metrics.hpp

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

namespace hlr {

/// Sample Pearson correlation. Throws UndefinedMetricError when either
/// input is constant, ShapeError on length mismatch or fewer than 2 values.
double pearson_r(std::span<const double> y, std::span<const double> yhat);

/// r / sqrt(r_xx * r_yy). The result is not clipped to [-1, 1].
/// Throws ConfigError unless both reliabilities are in (0, 1].
double disattenuated_r(double r, double r_xx = 0.70, double r_yy = 0.77);

/// Unweighted mean of per-class F1 over all `n_classes` classes. A class
/// that appears in neither vector scores 0. Labels must be integers in
/// [0, n_classes) or DataError is thrown.
double macro_f1(std::span<const double> y, std::span<const double> yhat, std::size_t n_classes);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

double mean(std::span<const double> v);
/// Sample standard deviation / sqrt(n).
double standard_error(std::span<const double> v);

/// Two-sided Student-t quantile t_{1 - alpha/2}(df).
double student_t_critical(double confidence, std::size_t df);

/// mean +/- t_{0.975}(n-1) * standard_error. Needs at least 2 values.
Interval confidence_interval(std::span<const double> scores, double confidence = 0.95);

/// Empirical quantiles (linear interpolation between order statistics) at
/// (1-confidence)/2 and (1+confidence)/2.
Interval percentile_interval(std::span<const double> scores, double confidence = 0.95);

}  // namespace hlr
