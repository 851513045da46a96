// include/hlr/app/results.hpp

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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hlr/eval.hpp"
#include "hlr/fkp.hpp"

namespace hlr::app {

struct TaskInfo {
  std::string name;
  std::string family;
  OutcomeKind kind = OutcomeKind::continuous;
  std::string metric;
  std::size_t full_dims = 0;  ///< h_D of the task features
};

/// The contents of results.json.
struct SweepResults {
  nlohmann::json config;  ///< experiment_json of the producing config
  std::string config_hash;
  std::vector<TaskInfo> tasks;
  std::vector<std::string> methods;  ///< config order
  std::vector<BootstrapResult> cells;
};

nlohmann::json to_json(const BootstrapResult& r);
BootstrapResult bootstrap_result_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const SweepResults& r);
SweepResults sweep_results_from_json(const nlohmann::json& doc);
SweepResults load_results(const std::filesystem::path& path);

/// One line per cell under the fixed header, cells in the given order.
std::string results_csv(const std::vector<BootstrapResult>& cells);
inline constexpr const char* kResultsCsvHeader =
    "task,method,k,n_ta,mean,std_error,ci_low,ci_high,seed";

/// Grid of one method's cells. k and n_ta values are the sorted distinct
/// values seen in that method's cells.
SweepGrid grid_for_method(const SweepResults& r, const std::string& method);
std::map<std::string, std::string> task_families(const SweepResults& r);

/// Every method's fkp table; throws IncompleteGridError if any grid has holes.
std::vector<FkpReport> fkp_reports(const SweepResults& r);

/// Rows are n_ta, columns are families, cells the rounded exponential median.
std::string fkp_csv(const FkpReport& report);
nlohmann::json to_json(const std::vector<FkpReport>& reports);
/// Plain-text table for the terminal.
std::string fkp_text(const FkpReport& report);

}  // namespace hlr::app
