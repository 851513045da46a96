// tools/hlr_main.cpp

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

// Command-line front end. Exit status: 0 success, 1 runtime or data error,
// 2 configuration error (including bad command-line usage).

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hlr/aggregate.hpp"
#include "hlr/app/config.hpp"
#include "hlr/app/plot.hpp"
#include "hlr/app/results.hpp"
#include "hlr/app/sweep.hpp"
#include "hlr/corpus.hpp"
#include "hlr/error.hpp"
#include "hlr/eval.hpp"
#include "hlr/io.hpp"
#include "hlr/reduce/reducer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool resume = false;
  std::size_t jobs = 0;  ///< 0 = take the config value
};


hlr::EmbeddingFormat format_for(const std::string& flag, const std::string& path) {
  return flag.empty() ? hlr::guess_embedding_format(path) : hlr::parse_embedding_format(flag);
}

hlr::ReducerOptions reducer_options(const Globals& g, std::optional<std::uint64_t>* seed) {
  if (g.config.empty()) return {};
  const hlr::app::ExperimentConfig cfg = hlr::app::load_config(g.config);
  if (seed) *seed = cfg.seed;
  return cfg.reducer;
}

void print_meta(const hlr::ReducerModel& m, const std::string& path) {
  std::printf("method=%s in_dims=%zu out_dims=%zu rows=%llu seed=%llu iterations=%llu "
              "objective=%s clamped=%llu file=%s\n",
              std::string(hlr::to_string(m.method)).c_str(), m.in_dims, m.out_dims,
              static_cast<unsigned long long>(m.meta.n_pretrain_rows),
              static_cast<unsigned long long>(m.meta.seed),
              static_cast<unsigned long long>(m.meta.iterations_run),
              hlr::io::format_double(m.meta.final_objective).c_str(),
              static_cast<unsigned long long>(m.meta.clamped), path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension reduction and bootstrapped evaluation for user-level embeddings", "hlr"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Experiment config (JSON)");
  app.add_option("--seed", g.seed, "Master seed (u64)");
  app.add_option("--out", g.out, "Output file or directory");
  app.add_flag("--resume", g.resume, "Reuse completed sweep cells");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);

  // fit-reducer
  auto* fit = app.add_subcommand("fit-reducer", "Fit a reducer on pretraining embeddings");
  std::string fit_input, fit_format, fit_method;
  std::size_t fit_k = 0;
  fit->add_option("--input", fit_input, "Pretraining embeddings")->required();
  fit->add_option("--format", fit_format, "binary or csv (default: by extension)");
  fit->add_option("--method", fit_method, "pca, pca_ppa, nmf, fa or nlae")->required();
  fit->add_option("-k,--k", fit_k, "Output dimensions")->required();

  // transform
  auto* tr = app.add_subcommand("transform", "Apply a fitted reducer to an embedding table");
  std::string tr_reducer, tr_input, tr_format, tr_out_format;
  tr->add_option("--reducer", tr_reducer, "EDR1 reducer file")->required();
  tr->add_option("--input", tr_input, "Embeddings to transform")->required();
  tr->add_option("--format", tr_format, "Input format");
  tr->add_option("--out-format", tr_out_format, "Output format (default: by extension)");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Bootstrapped evaluation of one task cell");
  std::string ev_train_x, ev_train_y, ev_test_x, ev_test_y, ev_kind, ev_format, ev_reducer;
  std::string ev_ci = "t", ev_task = "task";
  std::size_t ev_n_ta = 0, ev_replicates = 10;
  hlr::TrainConfig ev_model;
  bool ev_disattenuate = false;
  ev->add_option("--train-embeddings", ev_train_x)->required();
  ev->add_option("--train-outcomes", ev_train_y)->required();
  ev->add_option("--test-embeddings", ev_test_x)->required();
  ev->add_option("--test-outcomes", ev_test_y)->required();
  ev->add_option("--kind", ev_kind, "continuous, binary or multiclass4")->required();
  ev->add_option("--task", ev_task, "Task name for the report");
  ev->add_option("--format", ev_format, "Embedding format");
  ev->add_option("--reducer", ev_reducer, "Optional EDR1 reducer applied first");
  ev->add_option("--n-ta", ev_n_ta, "Training sample size")->required();
  ev->add_option("--replicates", ev_replicates, "Bootstrap replicates");
  ev->add_option("--lambda", ev_model.lambda, "L2 penalty");
  ev->add_option("--eta", ev_model.eta, "Learning rate");
  ev->add_option("--iterations", ev_model.iterations, "Gradient steps");
  ev->add_option("--ci", ev_ci, "t or percentile");
  ev->add_flag("--disattenuate", ev_disattenuate, "Report disattenuated Pearson r");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Run the full method x k x n_ta grid");

  // fkp
  auto* fk = app.add_subcommand("fkp", "First-k-to-peak tables from sweep results");
  std::string fk_results;
  fk->add_option("--results", fk_results, "results.json")->required();

  // plot
  auto* pl = app.add_subcommand("plot", "SVG plots from sweep results");
  std::string pl_results;
  pl->add_option("--results", pl_results, "results.json")->required();

  // aggregate
  auto* ag = app.add_subcommand("aggregate", "Average message embeddings per user");
  std::string ag_input, ag_format, ag_out_format;
  std::optional<std::size_t> ag_cap;
  ag->add_option("--input", ag_input, "Message-level embeddings")->required();
  ag->add_option("--format", ag_format, "Input format");
  ag->add_option("--out-format", ag_out_format, "Output format");
  ag->add_option("--cap", ag_cap, "Messages per user (default: all)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*fit) {
      if (g.out.empty()) throw hlr::ConfigError("fit-reducer: --out is required");
      std::optional<std::uint64_t> cfg_seed;
      const hlr::ReducerOptions opts = reducer_options(g, &cfg_seed);
      if (!g.seed && !cfg_seed) throw hlr::ConfigError("--seed is required");
      const std::uint64_t seed = g.seed ? *g.seed : *cfg_seed;
      const hlr::EmbeddingTable table =
          hlr::load_embeddings(fit_input, format_for(fit_format, fit_input));
      const hlr::ReducerModel model = hlr::fit_reducer(
          hlr::parse_method(fit_method), hlr::to_double(table.matrix), fit_k, seed, opts);
      hlr::save_reducer(model, g.out);
      print_meta(model, g.out);
    } else if (*tr) {
      if (g.out.empty()) throw hlr::ConfigError("transform: --out is required");
      const hlr::ReducerModel model = hlr::load_reducer(tr_reducer);
      const hlr::EmbeddingTable in = hlr::load_embeddings(tr_input, format_for(tr_format, tr_input));
      const hlr::EmbeddingTable reduced = hlr::transform(model, in);
      hlr::save_embeddings(reduced, g.out, format_for(tr_out_format, g.out));
      std::printf("%zu rows: %zu -> %zu dims, written to %s\n", reduced.rows(), in.dims(),
                  reduced.dims(), g.out.c_str());
    } else if (*ev) {
      if (!g.seed) throw hlr::ConfigError("--seed is required");
      const hlr::OutcomeKind kind = hlr::parse_outcome_kind(ev_kind);
      hlr::app::TaskSpec spec{ev_task, ev_task, kind, ev_train_x, ev_train_y,
                              ev_test_x, ev_test_y, format_for(ev_format, ev_train_x)};
      hlr::app::ExperimentConfig cfg;
      hlr::TaskDataset data = hlr::app::load_task(cfg, spec);
      std::string method = "full";
      if (!ev_reducer.empty()) {
        const hlr::ReducerModel model = hlr::load_reducer(ev_reducer);
        data.train_features = hlr::transform(model, data.train_features);
        data.test_features = hlr::transform(model, data.test_features);
        method = std::string(hlr::to_string(model.method));
      }
      hlr::BootstrapOptions bo;
      bo.n_ta = ev_n_ta;
      bo.replicates = ev_replicates;
      bo.seed = *g.seed;
      bo.model = ev_model;
      bo.ci = hlr::parse_ci_method(ev_ci);
      bo.scoring.disattenuate = ev_disattenuate;
      hlr::BootstrapResult r = hlr::bootstrap_eval(hlr::to_reduced_task(data, kind), bo);
      r.method = method;
      std::fputs(hlr::app::results_csv({r}).c_str(), stdout);
      if (!g.out.empty()) {
        fs::create_directories(g.out);
        hlr::io::write_file_atomic(fs::path(g.out) / "evaluation.json",
                                   hlr::app::to_json(r).dump(1) + "\n");
      }
    } else if (*sw) {
      if (g.config.empty()) throw hlr::ConfigError("sweep: --config is required");
      hlr::app::ExperimentConfig cfg = hlr::app::load_config(g.config);
      if (g.seed) cfg.seed = g.seed;
      if (!g.out.empty()) cfg.out_dir = g.out;
      if (g.jobs) cfg.jobs = g.jobs;
      hlr::app::SweepOptions so;
      so.resume = g.resume;
      so.log = &std::cerr;
      const auto summary = hlr::app::run_sweep(cfg, so);
      for (const auto& rep : summary.fkp) std::fputs(hlr::app::fkp_text(rep).c_str(), stdout);
      std::printf("results written to %s\n", cfg.out_dir.string().c_str());
    } else if (*fk) {
      const auto results = hlr::app::load_results(fk_results);
      const auto reports = hlr::app::fkp_reports(results);
      for (const auto& rep : reports) std::fputs(hlr::app::fkp_text(rep).c_str(), stdout);
      if (!g.out.empty()) {
        fs::create_directories(g.out);
        for (const auto& rep : reports)
          hlr::io::write_file_atomic(fs::path(g.out) / ("fkp_" + rep.method + ".csv"),
                                     hlr::app::fkp_csv(rep));
        hlr::io::write_file_atomic(fs::path(g.out) / "fkp.json",
                                   hlr::app::to_json(reports).dump(1) + "\n");
      }
    } else if (*pl) {
      if (g.out.empty()) throw hlr::ConfigError("plot: --out is required");
      const auto results = hlr::app::load_results(pl_results);
      for (const auto& p : hlr::app::write_plots(results, g.out, std::cerr))
        std::printf("%s\n", p.string().c_str());
    } else if (*ag) {
      if (g.out.empty()) throw hlr::ConfigError("aggregate: --out is required");
      hlr::AggregationConfig ac;
      ac.message_cap = ag_cap;
      if (ag_cap && !g.seed) throw hlr::ConfigError("--seed is required with --cap");
      ac.seed = g.seed.value_or(0);
      const hlr::EmbeddingTable messages =
          hlr::load_embeddings(ag_input, format_for(ag_format, ag_input));
      const hlr::EmbeddingTable users = hlr::aggregate_users(messages, ac);
      hlr::save_embeddings(users, g.out, format_for(ag_out_format, g.out));
      std::printf("%zu messages -> %zu users\n", messages.rows(), users.rows());
    }
  } catch (const hlr::ConfigError& e) {
    std::fprintf(stderr, "hlr: configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hlr: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
