// src/app/sweep.cpp

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

#include "hlr/app/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <optional>
#include <thread>

#include "hlr/error.hpp"
#include "hlr/io.hpp"
#include "hlr/rng.hpp"
#include "hlr/simd/kernels.hpp"

namespace hlr::app {

namespace fs = std::filesystem;
using nlohmann::json;

void Log::line(const std::string& msg) {
  if (!out_) return;
  std::lock_guard lock(mu_);
  *out_ << "hlr: " << msg << '\n';
  out_->flush();
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = std::min(std::max<std::size_t>(jobs, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) run(i);
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

TaskDataset load_task(const ExperimentConfig& cfg, const TaskSpec& spec) {
  auto side = [&](const std::string& emb, const std::string& out) {
    EmbeddingTable features = load_embeddings(cfg.resolve(emb), spec.format);
    if (features.level != Level::user)
      throw DataError(spec.name + ": task embeddings must be user-level");
    OutcomeTable outcomes = load_outcomes(cfg.resolve(out), spec.kind);
    return align(features, outcomes);
  };
  Aligned train = side(spec.train_embeddings, spec.train_outcomes);
  Aligned test = side(spec.test_embeddings, spec.test_outcomes);
  TaskDataset data{spec.name, std::move(train.features), std::move(train.outcomes),
                   std::move(test.features), std::move(test.outcomes)};
  data.validate();
  return data;
}

std::string reducer_cache_name(Method method, std::size_t k, const std::string& pretrain_hash,
                               std::uint64_t seed, const std::string& options_hash) {
  return std::string(to_string(method)) + "_k" + std::to_string(k) + "_" + pretrain_hash + "_s" +
         std::to_string(seed) + "_o" + options_hash + ".edr";
}

std::uint64_t cell_seed(std::uint64_t master, const std::string& task, std::size_t n_ta) {
  return derive_seed(derive_seed(master, "cell/" + task), n_ta);
}

std::uint64_t reducer_seed(std::uint64_t master, Method method, std::size_t k) {
  return derive_seed(derive_seed(master, "reducer/" + std::string(to_string(method))), k);
}

namespace {

constexpr const char* kFullLabel = "full";

struct CellJob {
  std::size_t task = 0;
  std::optional<std::size_t> reducer;  ///< index into the reducer list; empty = full features
  std::size_t n_ta = 0;
  std::string file;
};

std::string cell_file_name(const std::string& task, const std::string& label, std::size_t k,
                           std::size_t n_ta) {
  return task + "__" + label + "__k" + std::to_string(k) + "__n" + std::to_string(n_ta) + ".json";
}

std::optional<BootstrapResult> read_cell(const fs::path& path, std::uint64_t expected_seed) {
  if (!fs::exists(path)) return std::nullopt;
  try {
    BootstrapResult r = bootstrap_result_from_json(json::parse(io::read_file(path)));
    if (r.seed != expected_seed) return std::nullopt;
    return r;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

SweepSummary run_sweep(const ExperimentConfig& cfg, const SweepOptions& opts) {
  validate(cfg);
  Log log(opts.log);
  const std::uint64_t master = *cfg.seed;
  const std::string hash = config_hash(cfg);

  const fs::path out = cfg.out_dir;
  const fs::path cells_dir = out / "cells";
  const fs::path cache_dir = out / "reducers";
  const fs::path manifest_path = out / "manifest.json";
  fs::create_directories(cells_dir);
  fs::create_directories(cache_dir);

  if (opts.resume && fs::exists(manifest_path)) {
    json prior;
    try {
      prior = json::parse(io::read_file(manifest_path));
    } catch (const json::parse_error& e) {
      throw FormatError(manifest_path.string() + ": " + e.what());
    }
    if (prior.value("config_hash", std::string()) != hash)
      throw ConfigError("--resume: " + manifest_path.string() +
                        " was written for a different config (hash " +
                        prior.value("config_hash", std::string("?")) + ", now " + hash + ")");
  }

  // Marks the directory as belonging to this config until the final
  // manifest replaces it.
  io::write_file_atomic(manifest_path, json{{"format", "hlr-manifest/1"},
                                            {"config_hash", hash},
                                            {"seed", master},
                                            {"complete", false}}
                                               .dump(1) +
                                           "\n");

  // Pretraining data and tasks.
  const fs::path pretrain_path = cfg.resolve(cfg.pretrain_embeddings);
  const std::string pretrain_hash = io::content_hash(pretrain_path);
  const EmbeddingTable pretrain = load_embeddings(pretrain_path, cfg.pretrain_format);
  const std::size_t h_d = pretrain.dims();
  log.line("pretrain " + pretrain_path.string() + ": " + std::to_string(pretrain.rows()) + " x " +
           std::to_string(h_d));

  std::vector<ReducedTask> full;
  json task_manifest = json::array();
  for (const auto& spec : cfg.tasks) {
    TaskDataset data = load_task(cfg, spec);
    if (data.train_features.dims() != h_d)
      throw ShapeError(spec.name + ": task dims " + std::to_string(data.train_features.dims()) +
                       " differ from pretrain dims " + std::to_string(h_d));
    task_manifest.push_back({{"name", spec.name},
                             {"train_rows", data.train_features.rows()},
                             {"test_rows", data.test_features.rows()}});
    full.push_back(to_reduced_task(data, spec.kind));
  }

  std::vector<std::size_t> ks;
  for (auto k : cfg.k_values) {
    if (k > h_d)
      throw ConfigError("k=" + std::to_string(k) + " exceeds the feature width " +
                        std::to_string(h_d));
    ks.push_back(k);
  }
  const bool want_full = cfg.include_full || std::find(ks.begin(), ks.end(), h_d) != ks.end();
  ks.erase(std::remove(ks.begin(), ks.end(), h_d), ks.end());

  // Reducers, fitted once per (method, k) or read back from the cache.
  struct ReducerSlot {
    Method method;
    std::size_t k;
    std::string file;
    ReducerModel model;
    bool cached = false;
  };
  const std::string options_hash = io::hex64(fnv1a64(to_json(cfg.reducer).dump()));
  std::vector<ReducerSlot> reducers;
  for (auto m : cfg.methods)
    for (auto k : ks)
      reducers.push_back({m, k, reducer_cache_name(m, k, pretrain_hash, master, options_hash), {}});

  const Matrix pretrain_x = to_double(pretrain.matrix);
  parallel_for(reducers.size(), cfg.jobs, [&](std::size_t i) {
    auto& slot = reducers[i];
    const fs::path path = cache_dir / slot.file;
    const std::string label =
        std::string(to_string(slot.method)) + " k=" + std::to_string(slot.k);
    if (fs::exists(path)) {
      try {
        slot.model = load_reducer(path);
        if (slot.model.method == slot.method && slot.model.out_dims == slot.k &&
            slot.model.in_dims == h_d) {
          slot.cached = true;
          log.line("reducer " + label + ": cache hit " + path.string());
          return;
        }
      } catch (const FormatError&) {
      }
      log.line("reducer " + label + ": ignoring unreadable cache file " + path.string());
    }
    slot.model = fit_reducer(slot.method, pretrain_x, slot.k,
                             reducer_seed(master, slot.method, slot.k), cfg.reducer);
    save_reducer(slot.model, path);
    log.line("reducer " + label + ": fitted");
  });

  // Reduced task views.
  std::vector<std::vector<ReducedTask>> reduced(full.size());
  for (std::size_t t = 0; t < full.size(); ++t) reduced[t].resize(reducers.size());
  parallel_for(full.size() * reducers.size(), cfg.jobs, [&](std::size_t idx) {
    const std::size_t t = idx / reducers.size();
    const std::size_t r = idx % reducers.size();
    ReducedTask& dst = reduced[t][r];
    dst.task_name = full[t].task_name;
    dst.kind = full[t].kind;
    dst.train_x = transform(reducers[r].model, full[t].train_x);
    dst.test_x = transform(reducers[r].model, full[t].test_x);
    dst.train_y = full[t].train_y;
    dst.test_y = full[t].test_y;
  });

  // Cells. The full-feature cells do not depend on the method, so they are
  // evaluated once and reported under every method.
  std::vector<CellJob> jobs;
  for (std::size_t t = 0; t < full.size(); ++t) {
    const std::string& task = full[t].task_name;
    for (auto n : cfg.n_ta_values) {
      if (want_full) jobs.push_back({t, std::nullopt, n, cell_file_name(task, kFullLabel, h_d, n)});
      for (std::size_t r = 0; r < reducers.size(); ++r)
        jobs.push_back({t, r, n,
                        cell_file_name(task, std::string(to_string(reducers[r].method)),
                                       reducers[r].k, n)});
    }
  }

  std::vector<BootstrapResult> computed(jobs.size());
  std::vector<char> reused(jobs.size(), 0);
  parallel_for(jobs.size(), cfg.jobs, [&](std::size_t i) {
    const CellJob& job = jobs[i];
    const ReducedTask& data = job.reducer ? reduced[job.task][*job.reducer] : full[job.task];
    const std::uint64_t seed = cell_seed(master, data.task_name, job.n_ta);
    const fs::path path = cells_dir / job.file;
    if (opts.resume) {
      if (auto prior = read_cell(path, seed)) {
        computed[i] = std::move(*prior);
        reused[i] = 1;
        return;
      }
    }
    BootstrapOptions bo;
    bo.n_ta = job.n_ta;
    bo.replicates = cfg.replicates;
    bo.seed = seed;
    bo.model = cfg.model;
    bo.ci = cfg.ci;
    bo.confidence = cfg.confidence;
    bo.scoring = cfg.scoring;
    BootstrapResult r = bootstrap_eval(data, bo);
    r.method = job.reducer ? std::string(to_string(reducers[*job.reducer].method)) : kFullLabel;
    io::write_file_atomic(path, to_json(r).dump(1) + "\n");
    log.line("cell " + job.file.substr(0, job.file.size() - 5) + ": mean " +
             io::format_double(r.mean));
    computed[i] = std::move(r);
  });

  SweepSummary summary;
  for (std::size_t i = 0; i < jobs.size(); ++i) (reused[i] ? summary.cells_reused : summary.cells_computed)++;
  for (const auto& slot : reducers) (slot.cached ? summary.reducers_cached : summary.reducers_fitted)++;

  // Assemble in task, method, k, n_ta order.
  SweepResults& res = summary.results;
  res.config = experiment_json(cfg);
  res.config_hash = hash;
  for (auto m : cfg.methods) res.methods.emplace_back(to_string(m));
  for (std::size_t t = 0; t < cfg.tasks.size(); ++t)
    res.tasks.push_back({cfg.tasks[t].name, cfg.tasks[t].family, cfg.tasks[t].kind,
                         metric_name(cfg.tasks[t].kind, cfg.scoring), h_d});

  std::map<std::tuple<std::size_t, std::string, std::size_t, std::size_t>, const BootstrapResult*>
      index;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& c = computed[i];
    index[{jobs[i].task, c.method, c.k, c.n_ta}] = &c;
  }
  std::vector<std::size_t> all_k = ks;
  if (want_full) all_k.push_back(h_d);
  json cell_files = json::array();
  for (std::size_t t = 0; t < full.size(); ++t)
    for (const auto& m : res.methods)
      for (auto k : all_k)
        for (auto n : cfg.n_ta_values) {
          const std::string source = k == h_d ? kFullLabel : m;
          auto it = index.find({t, source, k, n});
          if (it == index.end())
            throw IncompleteGridError("missing cell " + full[t].task_name + "/" + m + "/k" +
                                      std::to_string(k) + "/n" + std::to_string(n));
          BootstrapResult cell = *it->second;
          cell.method = m;
          res.cells.push_back(std::move(cell));
        }
  for (const auto& job : jobs) cell_files.push_back("cells/" + job.file);

  summary.fkp = fkp_reports(res);

  json reducer_files = json::array();
  for (const auto& slot : reducers)
    reducer_files.push_back({{"method", to_string(slot.method)},
                             {"k", slot.k},
                             {"file", "reducers/" + slot.file},
                             {"iterations_run", slot.model.meta.iterations_run},
                             {"final_objective", slot.model.meta.final_objective},
                             {"clamped", slot.model.meta.clamped}});
  std::vector<std::string> outputs{"results.csv", "results.json", "fkp.json"};
  for (const auto& m : res.methods) outputs.push_back("fkp_" + m + ".csv");

  io::write_file_atomic(out / "results.csv", results_csv(res.cells));
  io::write_file_atomic(out / "results.json", to_json(res).dump(1) + "\n");
  for (const auto& rep : summary.fkp)
    io::write_file_atomic(out / ("fkp_" + rep.method + ".csv"), fkp_csv(rep));
  io::write_file_atomic(out / "fkp.json", to_json(summary.fkp).dump(1) + "\n");

  const json manifest = {{"format", "hlr-manifest/1"},
                         {"tool_version", "0.1.0"},
                         {"config_hash", hash},
                         {"seed", master},
                         {"complete", true},
                         {"config", res.config},
                         {"pretrain",
                          {{"content_hash", pretrain_hash},
                           {"rows", pretrain.rows()},
                           {"dims", h_d}}},
                         {"tasks", task_manifest},
                         {"simd", simd::isa_name(simd::active_isa())},
                         {"reducers", reducer_files},
                         {"cells", cell_files},
                         {"outputs", outputs}};
  io::write_file_atomic(manifest_path, manifest.dump(1) + "\n");

  log.line("sweep done: " + std::to_string(summary.cells_computed) + " cells computed, " +
           std::to_string(summary.cells_reused) + " reused; " +
           std::to_string(summary.reducers_fitted) + " reducers fitted, " +
           std::to_string(summary.reducers_cached) + " cached");
  return summary;
}

}  // namespace hlr::app
