// include/hlr/fkp.hpp

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
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "hlr/eval.hpp"

namespace hlr {

/// What first_k_to_peak needs from a cell.
struct KScore {
  std::size_t k = 0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Smallest k whose mean reaches the lower CI bound of the peak (the cell
/// with the highest mean; the smallest such k on ties). Higher scores are
/// better. Throws DataError on an empty row.
std::size_t first_k_to_peak(std::span<const KScore> row);
std::size_t first_k_to_peak(const std::map<std::size_t, BootstrapResult>& row);

/// 2^(median of log2 values); even-length lists use the midpoint of the two
/// middle logs. Throws DataError for an empty list or a nonpositive value.
double exponential_median(std::span<const double> ks);
double exponential_median(std::span<const std::size_t> ks);

/// Integer shown in fkp tables: the exponential median truncated toward
/// zero (2^6.5 shows as 90). A relative slack of 1e-9 keeps exact powers of
/// two from dropping to the integer below.
std::size_t displayed_median(double exp_median);

struct CellKey {
  std::string task;
  std::size_t n_ta = 0;
  std::size_t k = 0;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

/// Results for one reduction method across tasks, n_ta and k.
struct SweepGrid {
  std::map<CellKey, BootstrapResult> cells;
  std::vector<std::size_t> k_values;     ///< strictly increasing
  std::vector<std::size_t> n_ta_values;  ///< strictly increasing
};

struct FkpRow {
  std::string family;
  std::size_t n_ta = 0;
  std::vector<std::string> tasks;
  std::vector<std::size_t> fkp;  ///< parallel to `tasks`
  double exp_median = 0.0;
};

struct FkpReport {
  std::string method;
  std::vector<std::string> families;  ///< column order
  std::vector<std::size_t> n_ta_values;
  std::vector<FkpRow> rows;           ///< n_ta-major, then family

  const FkpRow& at(const std::string& family, std::size_t n_ta) const;
};

/// Per (family, n_ta): fkp of every member task and their exponential
/// median. Families are ordered by name, tasks within a family by name.
/// Throws IncompleteGridError naming every missing (task, n_ta, k) cell.
FkpReport build_fkp_table(const SweepGrid& grid, const std::map<std::string, std::string>& families);

}  // namespace hlr
