// include/hlr/app/config.hpp

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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hlr/corpus.hpp"
#include "hlr/eval.hpp"
#include "hlr/reduce/reducer.hpp"

namespace hlr::app {

struct TaskSpec {
  std::string name;
  std::string family;  ///< defaults to the task name
  OutcomeKind kind = OutcomeKind::continuous;
  std::string train_embeddings;
  std::string train_outcomes;
  std::string test_embeddings;
  std::string test_outcomes;
  EmbeddingFormat format = EmbeddingFormat::binary;
};

/// Everything a sweep needs. Paths are kept as written and resolved against
/// `base_dir` (the directory of the config file) when used.
struct ExperimentConfig {
  std::filesystem::path base_dir;

  std::string pretrain_embeddings;
  EmbeddingFormat pretrain_format = EmbeddingFormat::binary;
  std::vector<TaskSpec> tasks;

  std::vector<Method> methods{Method::pca};
  std::vector<std::size_t> k_values{16, 32, 64, 128, 256, 512};
  /// Add the unreduced features as k = h_D.
  bool include_full = true;
  ReducerOptions reducer;

  std::vector<std::size_t> n_ta_values{50, 100, 200, 500, 1000};
  std::size_t replicates = 10;
  CiMethod ci = CiMethod::t;
  double confidence = 0.95;
  ScoringOptions scoring;
  TrainConfig model;

  std::optional<std::uint64_t> seed;

  // Execution settings; not part of the experiment identity.
  std::filesystem::path out_dir = "out";
  std::size_t jobs = 1;

  std::filesystem::path resolve(const std::string& p) const;
};

/// Parse a config document. Unknown keys and wrong types are ConfigErrors.
ExperimentConfig config_from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully materialized experiment description (every default written out),
/// excluding execution settings. This is what the manifest records and what
/// config_hash digests.
nlohmann::json experiment_json(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

/// Seed present, grids non-empty and increasing, referenced files exist.
void validate(const ExperimentConfig& cfg);

nlohmann::json to_json(const ReducerOptions& opts);
ReducerOptions reducer_options_from_json(const nlohmann::json& doc);

}  // namespace hlr::app
