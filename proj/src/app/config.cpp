// src/app/config.cpp

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

#include "hlr/app/config.hpp"

#include <algorithm>
#include <set>

#include "hlr/error.hpp"
#include "hlr/io.hpp"
#include "hlr/rng.hpp"

namespace hlr::app {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + " is missing '" + key + "'");
  std::string s;
  read(obj, key, s, where);
  return s;
}

void check_increasing(const std::vector<std::size_t>& v, const char* what) {
  if (v.empty()) throw ConfigError(std::string(what) + " grid is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) throw ConfigError(std::string(what) + " values must be positive");
    if (i && v[i] <= v[i - 1])
      throw ConfigError(std::string(what) + " values must be strictly increasing");
  }
}

std::string_view solver_name(PcaOptions::Solver s) {
  switch (s) {
    case PcaOptions::Solver::exact:
      return "exact";
    case PcaOptions::Solver::randomized:
      return "randomized";
    case PcaOptions::Solver::automatic:
      break;
  }
  return "auto";
}

}  // namespace

std::filesystem::path ExperimentConfig::resolve(const std::string& p) const {
  std::filesystem::path path(p);
  return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
}

json to_json(const ReducerOptions& o) {
  return {
      {"pca",
       {{"solver", solver_name(o.pca.solver)},
        {"exact_max_dims", o.pca.exact_max_dims},
        {"oversampling", o.pca.oversampling},
        {"power_iterations", o.pca.power_iterations}}},
      {"nmf", {{"iterations", o.nmf.iterations}, {"transform_iterations", nmf::kProjectIterations}}},
      {"fa",
       {{"max_iterations", o.fa.max_iterations}, {"tol", o.fa.tol}, {"psi_floor", o.fa.psi_floor}}},
      {"nlae",
       {{"max_epochs", o.nlae.max_epochs},
        {"patience", o.nlae.patience},
        {"batch_size", o.nlae.batch_size},
        {"learning_rate", o.nlae.learning_rate},
        {"weight_decay", o.nlae.weight_decay}}},
  };
}

ReducerOptions reducer_options_from_json(const json& doc) {
  ReducerOptions o;
  const std::string where = "reduction";
  if (doc.contains("pca")) {
    const auto& p = doc["pca"];
    check_keys(p, {"solver", "exact_max_dims", "oversampling", "power_iterations"}, "reduction.pca");
    std::string solver = "auto";
    read(p, "solver", solver, "reduction.pca");
    if (solver == "auto")
      o.pca.solver = PcaOptions::Solver::automatic;
    else if (solver == "exact")
      o.pca.solver = PcaOptions::Solver::exact;
    else if (solver == "randomized")
      o.pca.solver = PcaOptions::Solver::randomized;
    else
      throw ConfigError("reduction.pca.solver must be auto, exact or randomized");
    read(p, "exact_max_dims", o.pca.exact_max_dims, "reduction.pca");
    read(p, "oversampling", o.pca.oversampling, "reduction.pca");
    read(p, "power_iterations", o.pca.power_iterations, "reduction.pca");
  }
  if (doc.contains("nmf")) {
    const auto& p = doc["nmf"];
    check_keys(p, {"iterations", "transform_iterations"}, "reduction.nmf");
    read(p, "iterations", o.nmf.iterations, "reduction.nmf");
    if (p.contains("transform_iterations") &&
        p["transform_iterations"] != json(nmf::kProjectIterations))
      throw ConfigError("reduction.nmf.transform_iterations is fixed at " +
                        std::to_string(nmf::kProjectIterations));
  }
  if (doc.contains("fa")) {
    const auto& p = doc["fa"];
    check_keys(p, {"max_iterations", "tol", "psi_floor"}, "reduction.fa");
    read(p, "max_iterations", o.fa.max_iterations, "reduction.fa");
    read(p, "tol", o.fa.tol, "reduction.fa");
    read(p, "psi_floor", o.fa.psi_floor, "reduction.fa");
  }
  if (doc.contains("nlae")) {
    const auto& p = doc["nlae"];
    check_keys(p, {"max_epochs", "patience", "batch_size", "learning_rate", "weight_decay"},
               "reduction.nlae");
    read(p, "max_epochs", o.nlae.max_epochs, "reduction.nlae");
    read(p, "patience", o.nlae.patience, "reduction.nlae");
    read(p, "batch_size", o.nlae.batch_size, "reduction.nlae");
    read(p, "learning_rate", o.nlae.learning_rate, "reduction.nlae");
    read(p, "weight_decay", o.nlae.weight_decay, "reduction.nlae");
  }
  (void)where;
  return o;
}

ExperimentConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  check_keys(doc, {"seed", "pretrain", "tasks", "reduction", "evaluation", "model", "output"},
             "config");
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;

  if (doc.contains("seed")) {
    std::uint64_t seed = 0;
    read(doc, "seed", seed, "config");
    cfg.seed = seed;
  }

  if (doc.contains("pretrain")) {
    const auto& p = doc["pretrain"];
    check_keys(p, {"embeddings", "format"}, "pretrain");
    cfg.pretrain_embeddings = require_string(p, "embeddings", "pretrain");
    cfg.pretrain_format = p.contains("format")
                              ? parse_embedding_format(require_string(p, "format", "pretrain"))
                              : guess_embedding_format(cfg.pretrain_embeddings);
  }

  if (doc.contains("tasks")) {
    if (!doc["tasks"].is_array()) throw ConfigError("tasks must be an array");
    for (const auto& t : doc["tasks"]) {
      check_keys(t,
                 {"name", "family", "kind", "train_embeddings", "train_outcomes",
                  "test_embeddings", "test_outcomes", "format"},
                 "task");
      TaskSpec spec;
      spec.name = require_string(t, "name", "task");
      const std::string where = "task '" + spec.name + "'";
      spec.family = t.contains("family") ? require_string(t, "family", where) : spec.name;
      spec.kind = parse_outcome_kind(require_string(t, "kind", where));
      spec.train_embeddings = require_string(t, "train_embeddings", where);
      spec.train_outcomes = require_string(t, "train_outcomes", where);
      spec.test_embeddings = require_string(t, "test_embeddings", where);
      spec.test_outcomes = require_string(t, "test_outcomes", where);
      spec.format = t.contains("format") ? parse_embedding_format(require_string(t, "format", where))
                                         : guess_embedding_format(spec.train_embeddings);
      cfg.tasks.push_back(std::move(spec));
    }
  }

  if (doc.contains("reduction")) {
    const auto& r = doc["reduction"];
    check_keys(r, {"methods", "k", "include_full", "pca", "nmf", "fa", "nlae"}, "reduction");
    if (r.contains("methods")) {
      std::vector<std::string> names;
      read(r, "methods", names, "reduction");
      cfg.methods.clear();
      for (const auto& n : names) cfg.methods.push_back(parse_method(n));
    }
    read(r, "k", cfg.k_values, "reduction");
    read(r, "include_full", cfg.include_full, "reduction");
    cfg.reducer = reducer_options_from_json(r);
  }

  if (doc.contains("evaluation")) {
    const auto& e = doc["evaluation"];
    check_keys(e, {"n_ta", "replicates", "ci", "confidence", "disattenuate", "r_xx", "r_yy"},
               "evaluation");
    read(e, "n_ta", cfg.n_ta_values, "evaluation");
    read(e, "replicates", cfg.replicates, "evaluation");
    if (e.contains("ci")) cfg.ci = parse_ci_method(require_string(e, "ci", "evaluation"));
    read(e, "confidence", cfg.confidence, "evaluation");
    read(e, "disattenuate", cfg.scoring.disattenuate, "evaluation");
    read(e, "r_xx", cfg.scoring.r_xx, "evaluation");
    read(e, "r_yy", cfg.scoring.r_yy, "evaluation");
  }

  if (doc.contains("model")) {
    const auto& m = doc["model"];
    check_keys(m, {"lambda", "eta", "iterations"}, "model");
    read(m, "lambda", cfg.model.lambda, "model");
    read(m, "eta", cfg.model.eta, "model");
    read(m, "iterations", cfg.model.iterations, "model");
  }

  if (doc.contains("output")) {
    const auto& o = doc["output"];
    check_keys(o, {"dir", "jobs"}, "output");
    if (o.contains("dir")) cfg.out_dir = cfg.resolve(require_string(o, "dir", "output"));
    read(o, "jobs", cfg.jobs, "output");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
  json doc;
  try {
    doc = json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(doc, path.parent_path());
}

json experiment_json(const ExperimentConfig& cfg) {
  json tasks = json::array();
  for (const auto& t : cfg.tasks)
    tasks.push_back({{"name", t.name},
                     {"family", t.family},
                     {"kind", to_string(t.kind)},
                     {"train_embeddings", t.train_embeddings},
                     {"train_outcomes", t.train_outcomes},
                     {"test_embeddings", t.test_embeddings},
                     {"test_outcomes", t.test_outcomes},
                     {"format", t.format == EmbeddingFormat::csv ? "csv" : "binary"}});
  json methods = json::array();
  for (auto m : cfg.methods) methods.push_back(to_string(m));
  json reduction = to_json(cfg.reducer);
  reduction["methods"] = methods;
  reduction["k"] = cfg.k_values;
  reduction["include_full"] = cfg.include_full;
  return {
      {"seed", cfg.seed ? json(*cfg.seed) : json(nullptr)},
      {"pretrain",
       {{"embeddings", cfg.pretrain_embeddings},
        {"format", cfg.pretrain_format == EmbeddingFormat::csv ? "csv" : "binary"}}},
      {"tasks", tasks},
      {"reduction", reduction},
      {"evaluation",
       {{"n_ta", cfg.n_ta_values},
        {"replicates", cfg.replicates},
        {"ci", to_string(cfg.ci)},
        {"confidence", cfg.confidence},
        {"disattenuate", cfg.scoring.disattenuate},
        {"r_xx", cfg.scoring.r_xx},
        {"r_yy", cfg.scoring.r_yy},
        {"macro_f1_absent_class", "contributes 0"},
        {"multiclass_model", "one-vs-rest logistic"},
        {"feature_scaling", "z-score with replicate sample statistics"}}},
      {"model",
       {{"lambda", cfg.model.lambda},
        {"eta", cfg.model.eta},
        {"iterations", cfg.model.iterations}}},
  };
}

std::string config_hash(const ExperimentConfig& cfg) {
  return io::hex64(fnv1a64(experiment_json(cfg).dump()));
}

void validate(const ExperimentConfig& cfg) {
  if (!cfg.seed) throw ConfigError("a seed is required (config 'seed' or --seed)");
  if (cfg.pretrain_embeddings.empty()) throw ConfigError("pretrain.embeddings is required");
  if (cfg.tasks.empty()) throw ConfigError("at least one task is required");
  if (cfg.methods.empty()) throw ConfigError("reduction.methods is empty");
  check_increasing(cfg.k_values, "reduction.k");
  check_increasing(cfg.n_ta_values, "evaluation.n_ta");
  if (cfg.replicates < 2) throw ConfigError("evaluation.replicates must be >= 2");
  if (cfg.jobs == 0) throw ConfigError("jobs must be >= 1");
  std::set<std::string> names;
  for (const auto& t : cfg.tasks) {
    if (!names.insert(t.name).second) throw ConfigError("duplicate task name '" + t.name + "'");
    if (t.name.find_first_of("/\\,\n") != std::string::npos)
      throw ConfigError("task name '" + t.name + "' contains a reserved character");
  }
  auto must_exist = [&](const std::string& p, const std::string& what) {
    if (!std::filesystem::exists(cfg.resolve(p)))
      throw ConfigError(what + " not found: " + cfg.resolve(p).string());
  };
  must_exist(cfg.pretrain_embeddings, "pretrain embeddings");
  for (const auto& t : cfg.tasks) {
    must_exist(t.train_embeddings, t.name + " train embeddings");
    must_exist(t.train_outcomes, t.name + " train outcomes");
    must_exist(t.test_embeddings, t.name + " test embeddings");
    must_exist(t.test_outcomes, t.name + " test outcomes");
  }
}

}  // namespace hlr::app
