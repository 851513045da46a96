// include/hlr/app/sweep.hpp

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
#include <filesystem>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "hlr/app/config.hpp"
#include "hlr/app/results.hpp"

namespace hlr::app {

/// Serialized progress lines on a shared stream.
class Log {
 public:
  explicit Log(std::ostream* out) : out_(out) {}
  void line(const std::string& msg);

 private:
  std::ostream* out_;
  std::mutex mu_;
};

/// Run fn(0..n-1) on up to `jobs` threads. Every index runs even if one
/// throws; the exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

/// Load, align and validate the train and test sides of a configured task.
TaskDataset load_task(const ExperimentConfig& cfg, const TaskSpec& spec);

struct SweepOptions {
  bool resume = false;
  std::ostream* log = nullptr;  ///< progress lines; nullptr is silent
};

struct SweepSummary {
  SweepResults results;
  std::vector<FkpReport> fkp;
  std::size_t cells_computed = 0;
  std::size_t cells_reused = 0;
  std::size_t reducers_fitted = 0;
  std::size_t reducers_cached = 0;
};

/// Fit or load every reducer, evaluate every (task, method, k, n_ta) cell
/// and write results.csv, results.json, fkp_<method>.csv, fkp.json and
/// manifest.json under cfg.out_dir. k equal to the feature width means the
/// unreduced features. All cells of one (task, n_ta) share a bootstrap seed.
SweepSummary run_sweep(const ExperimentConfig& cfg, const SweepOptions& opts = {});

/// Cache file name for a fitted reducer.
std::string reducer_cache_name(Method method, std::size_t k, const std::string& pretrain_hash,
                               std::uint64_t seed, const std::string& options_hash);

/// Seed shared by every cell of a (task, n_ta) pair.
std::uint64_t cell_seed(std::uint64_t master, const std::string& task, std::size_t n_ta);

/// Seed handed to the reducer fit for (method, k).
std::uint64_t reducer_seed(std::uint64_t master, Method method, std::size_t k);

}  // namespace hlr::app
