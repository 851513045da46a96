// src/metrics.cpp

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

#include "hlr/metrics.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hlr/error.hpp"

namespace hlr {
namespace {

bool all_equal(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

}  // namespace

double pearson_r(std::span<const double> y, std::span<const double> yhat) {
  if (y.size() != yhat.size()) throw ShapeError("pearson_r: length mismatch");
  if (y.size() < 2) throw ShapeError("pearson_r: need at least 2 values");
  if (all_equal(y) || all_equal(yhat)) throw UndefinedMetricError("pearson_r: constant input");
  const double my = mean(y);
  const double mh = mean(yhat);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double a = y[i] - my;
    const double b = yhat[i] - mh;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedMetricError("pearson_r: constant input");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double disattenuated_r(double r, double r_xx, double r_yy) {
  if (!(r_xx > 0.0 && r_xx <= 1.0) || !(r_yy > 0.0 && r_yy <= 1.0))
    throw ConfigError("reliabilities must lie in (0, 1]");
  return r / std::sqrt(r_xx * r_yy);
}

double macro_f1(std::span<const double> y, std::span<const double> yhat, std::size_t n_classes) {
  if (y.size() != yhat.size()) throw ShapeError("macro_f1: length mismatch");
  if (n_classes == 0) throw ConfigError("macro_f1: n_classes must be positive");
  std::vector<std::size_t> tp(n_classes, 0), fp(n_classes, 0), fn(n_classes, 0);
  auto label = [&](double v, std::size_t i) {
    if (!(v >= 0.0) || v >= static_cast<double>(n_classes) || v != std::floor(v))
      throw DataError("macro_f1: label outside [0, " + std::to_string(n_classes) + ")", i);
    return static_cast<std::size_t>(v);
  };
  for (std::size_t i = 0; i < y.size(); ++i) {
    const std::size_t truth = label(y[i], i);
    const std::size_t pred = label(yhat[i], i);
    if (truth == pred) {
      ++tp[truth];
    } else {
      ++fp[pred];
      ++fn[truth];
    }
  }
  double total = 0.0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    const std::size_t denom = 2 * tp[c] + fp[c] + fn[c];
    if (denom) total += 2.0 * static_cast<double>(tp[c]) / static_cast<double>(denom);
  }
  return total / static_cast<double>(n_classes);
}

double mean(std::span<const double> v) {
  // Exact for constant input, which a plain sum/n is not.
  if (!v.empty() && all_equal(v)) return v.front();
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double standard_error(std::span<const double> v) {
  if (v.size() < 2) throw ShapeError("standard_error: need at least 2 values");
  if (all_equal(v)) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const auto n = static_cast<double>(v.size());
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

double student_t_critical(double confidence, std::size_t df) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must be in (0, 1)");
  if (df == 0) throw ConfigError("student_t_critical: df must be positive");
  const boost::math::students_t dist(static_cast<double>(df));
  return boost::math::quantile(dist, 0.5 + confidence / 2.0);
}

Interval confidence_interval(std::span<const double> scores, double confidence) {
  if (scores.size() < 2) throw ShapeError("confidence_interval: need at least 2 scores");
  const double m = mean(scores);
  const double half = student_t_critical(confidence, scores.size() - 1) * standard_error(scores);
  return {m - half, m + half};
}

Interval percentile_interval(std::span<const double> scores, double confidence) {
  if (scores.size() < 2) throw ShapeError("percentile_interval: need at least 2 scores");
  std::vector<double> s(scores.begin(), scores.end());
  std::sort(s.begin(), s.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
  };
  return {quantile((1.0 - confidence) / 2.0), quantile((1.0 + confidence) / 2.0)};
}

}  // namespace hlr
