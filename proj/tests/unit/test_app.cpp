// tests/unit/test_app.cpp

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

#include <doctest.h>

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hlr/app/config.hpp"
#include "hlr/app/plot.hpp"
#include "hlr/app/results.hpp"
#include "hlr/app/sweep.hpp"
#include "hlr/error.hpp"
#include "hlr/io.hpp"
#include "support/synthetic.hpp"

using namespace hlr;
using namespace hlr::app;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

testing::SyntheticSpec small_spec() {
  testing::SyntheticSpec s;
  s.train_users = 120;
  s.test_users = 60;
  s.dims = 24;
  s.rank = 3;
  s.seed = 5;
  return s;
}

// Writes the small task and returns the parsed config.
json small_config(const fs::path& dir, std::vector<std::size_t> ks = {4, 8},
                  std::vector<std::size_t> ns = {20, 40}) {
  const auto task = testing::make_synthetic_task(small_spec());
  json cfg = json::parse(testing::write_synthetic_sweep(task, dir, "t1", ks, ns, 11));
  cfg["evaluation"]["replicates"] = 4;
  return cfg;
}

ExperimentConfig load(const json& doc, const fs::path& dir, const fs::path& out) {
  ExperimentConfig cfg = config_from_json(doc, dir);
  cfg.out_dir = out;
  return cfg;
}

std::size_t count_lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST_CASE("config parsing fills defaults and rejects unknown keys") {
  const json doc = {{"seed", 3},
                    {"pretrain", {{"embeddings", "p.ueb"}}},
                    {"tasks", {{{"name", "age"}, {"kind", "continuous"}, {"train_embeddings", "a.csv"},
                                {"train_outcomes", "b.csv"}, {"test_embeddings", "c.csv"},
                                {"test_outcomes", "d.csv"}}}}};
  const auto cfg = config_from_json(doc, "/data");
  CHECK(*cfg.seed == 3);
  CHECK(cfg.tasks[0].family == "age");
  CHECK(cfg.tasks[0].format == EmbeddingFormat::csv);
  CHECK(cfg.pretrain_format == EmbeddingFormat::binary);
  CHECK(cfg.k_values == std::vector<std::size_t>{16, 32, 64, 128, 256, 512});
  CHECK(cfg.model.iterations == 100);
  CHECK(cfg.resolve("x.csv") == fs::path("/data/x.csv"));

  const json materialized = experiment_json(cfg);
  CHECK(materialized["model"]["lambda"] == 1.0);
  CHECK(materialized["model"]["eta"] == 0.01);
  CHECK(materialized["evaluation"]["ci"] == "t");
  CHECK(materialized["reduction"]["nmf"]["iterations"] == 300);
  CHECK(materialized["reduction"]["nmf"]["transform_iterations"] == 200);

  json bad = doc;
  bad["evaluation"] = {{"n_ta", {100}}, {"bootstraps", 10}};
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);
  bad = doc;
  bad["model"] = {{"lambda", "big"}};
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);
  bad = doc;
  bad["reduction"] = {{"methods", {"lda"}}};
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);
}

TEST_CASE("config hash tracks experiment fields only") {
  const json doc = {{"seed", 3}, {"pretrain", {{"embeddings", "p.ueb"}}}};
  const auto base = config_from_json(doc);
  const std::string h = config_hash(base);

  auto changed = base;
  changed.model.lambda = 2.0;
  CHECK(config_hash(changed) != h);
  changed = base;
  changed.seed = 4;
  CHECK(config_hash(changed) != h);
  changed = base;
  changed.n_ta_values = {50};
  CHECK(config_hash(changed) != h);
  changed = base;
  changed.reducer.nmf.iterations = 10;
  CHECK(config_hash(changed) != h);
  changed = base;
  changed.scoring.r_xx = 0.8;
  CHECK(config_hash(changed) != h);

  changed = base;
  changed.jobs = 8;
  changed.out_dir = "/elsewhere";
  CHECK(config_hash(changed) == h);
}

TEST_CASE("validation") {
  testing::TempDir dir("cfg");
  json doc = small_config(dir.path());
  CHECK_NOTHROW(validate(config_from_json(doc, dir.path())));
  json no_seed = doc;
  no_seed.erase("seed");
  CHECK_THROWS_AS(validate(config_from_json(no_seed, dir.path())), ConfigError);
  json missing = doc;
  missing["tasks"][0]["test_outcomes"] = "nope.csv";
  CHECK_THROWS_AS(validate(config_from_json(missing, dir.path())), ConfigError);
  json empty = doc;
  empty["evaluation"]["n_ta"] = json::array();
  CHECK_THROWS_AS(validate(config_from_json(empty, dir.path())), ConfigError);
  json unsorted = doc;
  unsorted["reduction"]["k"] = {8, 4};
  CHECK_THROWS_AS(validate(config_from_json(unsorted, dir.path())), ConfigError);
}

TEST_CASE("sweep grid cardinality, artifacts and determinism") {
  testing::TempDir dir("sweep");
  const json doc = small_config(dir.path());
  const auto a = run_sweep(load(doc, dir.path(), dir / "a"));
  const std::string csv = testing::file_bytes(dir / "a/results.csv");
  CHECK(count_lines(csv) == 5);
  CHECK(csv.rfind(std::string(kResultsCsvHeader) + "\n", 0) == 0);
  CHECK(a.results.cells.size() == 4);
  CHECK(a.reducers_fitted == 2);
  for (const char* f : {"results.json", "fkp.json", "fkp_pca.csv", "manifest.json"})
    CHECK(fs::exists(dir / "a" / f));

  const json manifest = json::parse(testing::file_bytes(dir / "a/manifest.json"));
  CHECK(manifest["config_hash"] == config_hash(load(doc, dir.path(), dir / "a")));
  CHECK(manifest["seed"] == 11);
  CHECK(manifest["config"]["model"]["eta"] == 0.01);
  CHECK(manifest["complete"] == true);

  // Same config into a fresh directory: identical bytes.
  const auto b = run_sweep(load(doc, dir.path(), dir / "b"));
  for (const char* f : {"results.csv", "results.json", "fkp.json", "fkp_pca.csv", "manifest.json"})
    CHECK(testing::file_bytes(dir / "a" / f) == testing::file_bytes(dir / "b" / f));

  // More workers, same bytes.
  auto parallel = load(doc, dir.path(), dir / "c");
  parallel.jobs = 3;
  run_sweep(parallel);
  CHECK(testing::file_bytes(dir / "a/results.json") == testing::file_bytes(dir / "c/results.json"));

  // Second run in the same directory hits the reducer cache.
  const auto again = run_sweep(load(doc, dir.path(), dir / "a"));
  CHECK(again.reducers_cached == 2);
  CHECK(again.reducers_fitted == 0);
  CHECK(testing::file_bytes(dir / "a/results.csv") == csv);
}

TEST_CASE("cells of one task and n_ta share a seed across k") {
  testing::TempDir dir("sweep");
  const auto s = run_sweep(load(small_config(dir.path()), dir.path(), dir / "o"));
  std::map<std::size_t, std::set<std::uint64_t>> seeds;
  for (const auto& c : s.results.cells) seeds[c.n_ta].insert(c.seed);
  for (const auto& [n, set] : seeds) CHECK(set.size() == 1);
  CHECK(seeds[20] != seeds[40]);
}

TEST_CASE("resume reuses cells and reproduces a clean run") {
  testing::TempDir dir("resume");
  const json doc = small_config(dir.path());
  run_sweep(load(doc, dir.path(), dir / "clean"));

  const auto out = dir / "interrupted";
  run_sweep(load(doc, dir.path(), out));
  // Simulate an interruption: final outputs gone and half the cells missing.
  for (const char* f : {"results.csv", "results.json", "fkp.json", "fkp_pca.csv", "manifest.json"})
    fs::remove(out / f);
  std::vector<fs::path> cells;
  for (const auto& e : fs::directory_iterator(out / "cells")) cells.push_back(e.path());
  std::sort(cells.begin(), cells.end());
  for (std::size_t i = 0; i < cells.size(); i += 2) fs::remove(cells[i]);

  SweepOptions opts;
  opts.resume = true;
  const auto s = run_sweep(load(doc, dir.path(), out), opts);
  CHECK(s.cells_reused == cells.size() / 2);
  CHECK(s.cells_computed == cells.size() - cells.size() / 2);
  for (const char* f : {"results.csv", "results.json", "fkp.json", "fkp_pca.csv", "manifest.json"})
    CHECK(testing::file_bytes(dir / "clean" / f) == testing::file_bytes(out / f));

  // Resuming under a different config is refused.
  json other = doc;
  other["model"] = {{"lambda", 5.0}};
  CHECK_THROWS_AS(run_sweep(load(other, dir.path(), out), opts), ConfigError);
}

TEST_CASE("full-feature column and fkp table") {
  testing::TempDir dir("sweep");
  json doc = small_config(dir.path(), {4, 8}, {20, 60});
  doc["reduction"]["include_full"] = true;
  doc["reduction"]["methods"] = {"pca", "fa"};
  doc["reduction"]["fa"] = {{"max_iterations", 20}};
  const auto s = run_sweep(load(doc, dir.path(), dir / "o"));
  CHECK(s.results.cells.size() == 2 * 3 * 2);
  // The k = 24 cells are shared by both methods.
  std::vector<const BootstrapResult*> full;
  for (const auto& c : s.results.cells)
    if (c.k == 24) full.push_back(&c);
  REQUIRE(full.size() == 4);
  CHECK(full[0]->scores == full[2]->scores);
  REQUIRE(s.fkp.size() == 2);
  for (const auto& rep : s.fkp)
    for (const auto& row : rep.rows)
      for (auto k : row.fkp) CHECK((k == 4 || k == 8 || k == 24));
  const std::string table = testing::file_bytes(dir / "o/fkp_fa.csv");
  CHECK(table.rfind("n_ta,t1\n20,", 0) == 0);
}

TEST_CASE("results json round trip and fkp rebuild") {
  testing::TempDir dir("sweep");
  const auto s = run_sweep(load(small_config(dir.path()), dir.path(), dir / "o"));
  const auto back = load_results(dir / "o/results.json");
  CHECK(back.cells.size() == s.results.cells.size());
  CHECK(results_csv(back.cells) == testing::file_bytes(dir / "o/results.csv"));
  CHECK(to_json(back).dump() == to_json(s.results).dump());
  const auto reps = fkp_reports(back);
  CHECK(fkp_csv(reps[0]) == testing::file_bytes(dir / "o/fkp_pca.csv"));

  SweepResults holes = back;
  holes.cells.pop_back();
  CHECK_THROWS_AS(fkp_reports(holes), IncompleteGridError);

  json unknown = to_json(back);
  unknown["cells"][0]["task"] = "ghost";
  CHECK_THROWS_AS(sweep_results_from_json(unknown), DataError);
}

TEST_CASE("svg plots") {
  SweepResults r;
  r.methods = {"pca"};
  r.tasks = {{"age", "age", OutcomeKind::continuous, "pearson_r", 768}};
  for (std::size_t n : {50, 100})
    for (std::size_t k : {16, 32, 64, 768}) {
      BootstrapResult c;
      c.task_name = "age";
      c.method = "pca";
      c.k = k;
      c.n_ta = n;
      c.mean = 0.1 * static_cast<double>(n) / 100 + 0.001 * static_cast<double>(k % 100);
      c.ci_low = c.mean - 0.02;
      c.ci_high = c.mean + 0.02;
      r.cells.push_back(c);
    }
  testing::TempDir dir("plot");
  std::ostringstream warn;
  const auto files = write_plots(r, dir / "plots", warn);
  REQUIRE(files.size() == 1);
  const std::string svg = testing::file_bytes(files[0]);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  auto count = [&](const std::string& needle) {
    std::size_t n = 0;
    for (auto p = svg.find(needle); p != std::string::npos; p = svg.find(needle, p + 1)) ++n;
    return n;
  };
  CHECK(count("<polyline class=\"series\"") == 2);
  CHECK(count("<polygon class=\"ci-band\"") == 2);
  CHECK(count("class=\"no-reduction\"") == 2);
  std::vector<std::string> ticks;
  const std::regex tick(R"(<text class="tick"[^>]*text-anchor="middle">(\d+)</text>)");
  for (std::sregex_iterator it(svg.begin(), svg.end(), tick), end; it != end; ++it)
    ticks.push_back((*it)[1]);
  CHECK(ticks == std::vector<std::string>{"16", "32", "64"});
  CHECK(warn.str().empty());

  SweepResults empty;
  CHECK(write_plots(empty, dir / "none", warn).empty());
  CHECK(warn.str().find("warning") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "none"));

  r.cells[0].task_name = "ghost";
  CHECK_THROWS_AS(write_plots(r, dir / "bad", warn), DataError);
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
  std::vector<int> hit(20, 0);
  try {
    parallel_for(20, 4, [&](std::size_t i) {
      hit[i] = 1;
      if (i == 7 || i == 13) throw DataError("fail " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()) == "fail 7");
  }
  CHECK(std::count(hit.begin(), hit.end(), 1) == 20);
}
