// src/fkp.cpp

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

#include "hlr/fkp.hpp"

#include <algorithm>
#include <cmath>

#include "hlr/error.hpp"

namespace hlr {

std::size_t first_k_to_peak(std::span<const KScore> row) {
  if (row.empty()) throw DataError("first_k_to_peak: empty row");
  std::vector<KScore> sorted(row.begin(), row.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const KScore& a, const KScore& b) { return a.k < b.k; });
  const KScore* peak = &sorted.front();
  for (const auto& c : sorted)
    if (c.mean > peak->mean) peak = &c;
  for (const auto& c : sorted)
    if (c.mean >= peak->ci_low) return c.k;
  return peak->k;
}

std::size_t first_k_to_peak(const std::map<std::size_t, BootstrapResult>& row) {
  std::vector<KScore> cells;
  cells.reserve(row.size());
  for (const auto& [k, r] : row) cells.push_back({k, r.mean, r.ci_low, r.ci_high});
  return first_k_to_peak(cells);
}

double exponential_median(std::span<const double> ks) {
  if (ks.empty()) throw DataError("exponential_median: empty list");
  std::vector<double> logs;
  logs.reserve(ks.size());
  for (double k : ks) {
    if (!(k > 0.0)) throw DataError("exponential_median: values must be positive");
    logs.push_back(std::log2(k));
  }
  std::sort(logs.begin(), logs.end());
  const std::size_t n = logs.size();
  const double mid = n % 2 ? logs[n / 2] : 0.5 * (logs[n / 2 - 1] + logs[n / 2]);
  return std::exp2(mid);
}

double exponential_median(std::span<const std::size_t> ks) {
  std::vector<double> v(ks.begin(), ks.end());
  return exponential_median(v);
}

const FkpRow& FkpReport::at(const std::string& family, std::size_t n_ta) const {
  for (const auto& r : rows)
    if (r.family == family && r.n_ta == n_ta) return r;
  throw DataError("fkp report has no row for " + family + " at n_ta=" + std::to_string(n_ta));
}

FkpReport build_fkp_table(const SweepGrid& grid,
                          const std::map<std::string, std::string>& families) {
  if (grid.k_values.empty() || grid.n_ta_values.empty())
    throw IncompleteGridError("sweep grid has no k or n_ta values");
  for (std::size_t i = 1; i < grid.k_values.size(); ++i)
    if (grid.k_values[i] <= grid.k_values[i - 1])
      throw ConfigError("k values must be strictly increasing");

  std::map<std::string, std::vector<std::string>> members;
  for (const auto& [task, family] : families) members[family].push_back(task);

  std::string missing;
  std::size_t missing_count = 0;
  for (const auto& [task, family] : families)
    for (std::size_t n : grid.n_ta_values)
      for (std::size_t k : grid.k_values)
        if (!grid.cells.count({task, n, k})) {
          if (missing_count < 50)
            missing += "\n  task=" + task + " n_ta=" + std::to_string(n) + " k=" + std::to_string(k);
          ++missing_count;
        }
  if (missing_count)
    throw IncompleteGridError(std::to_string(missing_count) + " missing cell(s):" + missing);

  FkpReport report;
  report.n_ta_values = grid.n_ta_values;
  for (const auto& [family, tasks] : members) report.families.push_back(family);
  for (std::size_t n : grid.n_ta_values) {
    for (const auto& [family, tasks] : members) {
      FkpRow row;
      row.family = family;
      row.n_ta = n;
      for (const auto& task : tasks) {
        std::vector<KScore> cells;
        for (std::size_t k : grid.k_values) {
          const auto& r = grid.cells.at({task, n, k});
          cells.push_back({k, r.mean, r.ci_low, r.ci_high});
        }
        row.tasks.push_back(task);
        row.fkp.push_back(first_k_to_peak(cells));
      }
      row.exp_median = exponential_median(std::span<const std::size_t>(row.fkp));
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::size_t displayed_median(double exp_median) {
  if (!(exp_median > 0.0)) throw DataError("displayed_median: value must be positive");
  return static_cast<std::size_t>(std::floor(exp_median * (1.0 + 1e-9)));
}

}  // namespace hlr
