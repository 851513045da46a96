// include/hlr/app/plot.hpp

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
#include <ostream>
#include <string>
#include <vector>

#include "hlr/app/results.hpp"

namespace hlr::app {

/// SVG for one task: a panel per method with mean score against k on a
/// log2 axis, one polyline per n_ta, the CI as a shaded band and the
/// unreduced score (k == full_dims) as a dashed horizontal line.
std::string render_task_svg(const SweepResults& results, const TaskInfo& task);

/// Writes `<task>.svg` per task that has cells and returns the paths.
/// Empty results produce a warning on `warn` and no files.
std::vector<std::filesystem::path> write_plots(const SweepResults& results,
                                               const std::filesystem::path& out_dir,
                                               std::ostream& warn);

}  // namespace hlr::app
