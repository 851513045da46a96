// include/hlr/eval.hpp

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
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hlr/corpus.hpp"
#include "hlr/linmod.hpp"
#include "hlr/matrix.hpp"
#include "hlr/metrics.hpp"

namespace hlr {

enum class CiMethod { t, percentile };

std::string_view to_string(CiMethod m) noexcept;
CiMethod parse_ci_method(std::string_view s);

/// Train/test features already mapped to k dims, with aligned outcomes.
struct ReducedTask {
  std::string task_name;
  OutcomeKind kind = OutcomeKind::continuous;
  Matrix train_x;
  Vector train_y;
  Matrix test_x;
  Vector test_y;
};

/// Aligned dataset -> ReducedTask over the raw feature matrices.
ReducedTask to_reduced_task(const TaskDataset& data, OutcomeKind kind);

struct ScoringOptions {
  bool disattenuate = false;
  double r_xx = 0.70;
  double r_yy = 0.77;
};

struct BootstrapOptions {
  std::size_t n_ta = 100;
  std::size_t replicates = 10;
  std::uint64_t seed = 0;
  TrainConfig model;
  CiMethod ci = CiMethod::t;
  double confidence = 0.95;
  ScoringOptions scoring;
};

struct BootstrapResult {
  std::string task_name;
  std::string method;
  std::size_t k = 0;
  std::size_t n_ta = 0;
  std::vector<double> scores;
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t seed = 0;
  TrainConfig model;
  CiMethod ci = CiMethod::t;
  std::string metric;
  /// Replicates redrawn because the first draw held a single class.
  std::size_t redrawn = 0;
};

/// Column z-scoring with statistics from one sample. Zero-variance columns
/// get scale 1 so they map to 0.
struct Standardizer {
  Vector mean;
  Vector scale;

  static Standardizer fit(const Matrix& x);
  Matrix apply(const Matrix& x) const;
};

/// "pearson_r", "disattenuated_r" or "macro_f1".
std::string metric_name(OutcomeKind kind, const ScoringOptions& opts);
double score_predictions(OutcomeKind kind, std::span<const double> y,
                         std::span<const double> yhat, const ScoringOptions& opts);

/// Fill mean, std_error and the interval from `scores`.
void summarize(BootstrapResult& result, CiMethod ci, double confidence);

/// Draw `replicates` training samples of n_ta rows with replacement; each
/// replicate is z-scored with its own statistics, trained from theta = 0 and
/// scored on the full test set. Replicate i uses derive_seed(seed, i), so
/// the result does not depend on evaluation order.
BootstrapResult bootstrap_eval(const ReducedTask& data, const BootstrapOptions& opts);

/// One replicate; exposed for tests and for callers that schedule
/// replicates themselves.
double bootstrap_replicate(const ReducedTask& data, const BootstrapOptions& opts,
                           std::size_t replicate, bool* redrawn = nullptr);

}  // namespace hlr
