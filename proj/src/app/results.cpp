// src/app/results.cpp

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

#include "hlr/app/results.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "hlr/error.hpp"
#include "hlr/io.hpp"

namespace hlr::app {

using nlohmann::json;

json to_json(const BootstrapResult& r) {
  return {{"task", r.task_name},
          {"method", r.method},
          {"k", r.k},
          {"n_ta", r.n_ta},
          {"seed", r.seed},
          {"metric", r.metric},
          {"scores", r.scores},
          {"mean", r.mean},
          {"std_error", r.std_error},
          {"ci_low", r.ci_low},
          {"ci_high", r.ci_high},
          {"ci", to_string(r.ci)},
          {"redrawn", r.redrawn},
          {"model",
           {{"lambda", r.model.lambda},
            {"eta", r.model.eta},
            {"iterations", r.model.iterations},
            {"fit_intercept", r.model.fit_intercept}}}};
}

BootstrapResult bootstrap_result_from_json(const json& doc) {
  try {
    BootstrapResult r;
    r.task_name = doc.at("task").get<std::string>();
    r.method = doc.at("method").get<std::string>();
    r.k = doc.at("k").get<std::size_t>();
    r.n_ta = doc.at("n_ta").get<std::size_t>();
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.metric = doc.value("metric", std::string());
    r.scores = doc.value("scores", std::vector<double>{});
    r.mean = doc.at("mean").get<double>();
    r.std_error = doc.at("std_error").get<double>();
    r.ci_low = doc.at("ci_low").get<double>();
    r.ci_high = doc.at("ci_high").get<double>();
    r.ci = parse_ci_method(doc.value("ci", std::string("t")));
    r.redrawn = doc.value("redrawn", std::size_t{0});
    if (doc.contains("model")) {
      const auto& m = doc["model"];
      r.model.lambda = m.value("lambda", r.model.lambda);
      r.model.eta = m.value("eta", r.model.eta);
      r.model.iterations = m.value("iterations", r.model.iterations);
      r.model.fit_intercept = m.value("fit_intercept", r.model.fit_intercept);
    }
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed result cell: ") + e.what());
  }
}

json to_json(const SweepResults& r) {
  json tasks = json::array();
  for (const auto& t : r.tasks)
    tasks.push_back({{"name", t.name},
                     {"family", t.family},
                     {"kind", to_string(t.kind)},
                     {"metric", t.metric},
                     {"full_dims", t.full_dims}});
  json cells = json::array();
  for (const auto& c : r.cells) cells.push_back(to_json(c));
  return {{"format", "hlr-results/1"},
          {"config_hash", r.config_hash},
          {"config", r.config},
          {"methods", r.methods},
          {"tasks", tasks},
          {"cells", cells}};
}

SweepResults sweep_results_from_json(const json& doc) {
  SweepResults r;
  try {
    if (doc.value("format", std::string()) != "hlr-results/1")
      throw FormatError("not a results file (format tag missing or unknown)");
    r.config_hash = doc.value("config_hash", std::string());
    r.config = doc.value("config", json::object());
    r.methods = doc.value("methods", std::vector<std::string>{});
    for (const auto& t : doc.at("tasks")) {
      TaskInfo info;
      info.name = t.at("name").get<std::string>();
      info.family = t.value("family", info.name);
      info.kind = parse_outcome_kind(t.at("kind").get<std::string>());
      info.metric = t.value("metric", std::string());
      info.full_dims = t.value("full_dims", std::size_t{0});
      r.tasks.push_back(std::move(info));
    }
    for (const auto& c : doc.at("cells")) r.cells.push_back(bootstrap_result_from_json(c));
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed results file: ") + e.what());
  }
  std::set<std::string> names;
  for (const auto& t : r.tasks) names.insert(t.name);
  for (const auto& c : r.cells)
    if (!names.count(c.task_name))
      throw DataError("results cell names unknown task '" + c.task_name + "'");
  return r;
}

SweepResults load_results(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return sweep_results_from_json(doc);
}

std::string results_csv(const std::vector<BootstrapResult>& cells) {
  std::string out = kResultsCsvHeader;
  out += '\n';
  for (const auto& c : cells) {
    out += c.task_name + ',' + c.method + ',' + std::to_string(c.k) + ',' +
           std::to_string(c.n_ta) + ',' + io::format_double(c.mean) + ',' +
           io::format_double(c.std_error) + ',' + io::format_double(c.ci_low) + ',' +
           io::format_double(c.ci_high) + ',' + std::to_string(c.seed) + '\n';
  }
  return out;
}

SweepGrid grid_for_method(const SweepResults& r, const std::string& method) {
  SweepGrid grid;
  std::set<std::size_t> ks, ns;
  for (const auto& c : r.cells) {
    if (c.method != method) continue;
    ks.insert(c.k);
    ns.insert(c.n_ta);
    grid.cells[CellKey{c.task_name, c.n_ta, c.k}] = c;
  }
  grid.k_values.assign(ks.begin(), ks.end());
  grid.n_ta_values.assign(ns.begin(), ns.end());
  return grid;
}

std::map<std::string, std::string> task_families(const SweepResults& r) {
  std::map<std::string, std::string> out;
  for (const auto& t : r.tasks) out[t.name] = t.family;
  return out;
}

std::vector<FkpReport> fkp_reports(const SweepResults& r) {
  std::vector<FkpReport> out;
  for (const auto& m : r.methods) {
    FkpReport rep = build_fkp_table(grid_for_method(r, m), task_families(r));
    rep.method = m;
    out.push_back(std::move(rep));
  }
  return out;
}

std::string fkp_csv(const FkpReport& report) {
  std::string out = "n_ta";
  for (const auto& f : report.families) out += ',' + f;
  out += '\n';
  for (auto n : report.n_ta_values) {
    out += std::to_string(n);
    for (const auto& f : report.families)
      out += ',' + std::to_string(displayed_median(report.at(f, n).exp_median));
    out += '\n';
  }
  return out;
}

json to_json(const std::vector<FkpReport>& reports) {
  json methods = json::array();
  for (const auto& rep : reports) {
    json rows = json::array();
    for (const auto& row : rep.rows) {
      json tasks = json::array();
      for (std::size_t i = 0; i < row.tasks.size(); ++i)
        tasks.push_back({{"task", row.tasks[i]}, {"fkp", row.fkp[i]}});
      rows.push_back({{"family", row.family},
                      {"n_ta", row.n_ta},
                      {"tasks", tasks},
                      {"exp_median", row.exp_median},
                      {"displayed", displayed_median(row.exp_median)}});
    }
    methods.push_back({{"method", rep.method},
                       {"families", rep.families},
                       {"n_ta", rep.n_ta_values},
                       {"rows", rows}});
  }
  return {{"format", "hlr-fkp/1"},
          {"rule", "smallest k with mean >= lower CI bound of the best k"},
          {"summary", "2^median(log2 fkp) per family, shown truncated to an integer"},
          {"methods", methods}};
}

std::string fkp_text(const FkpReport& report) {
  std::string out = "method " + report.method + "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%8s", "n_ta");
  out += buf;
  for (const auto& f : report.families) {
    std::snprintf(buf, sizeof buf, " %12s", f.c_str());
    out += buf;
  }
  out += '\n';
  for (auto n : report.n_ta_values) {
    std::snprintf(buf, sizeof buf, "%8zu", n);
    out += buf;
    for (const auto& f : report.families) {
      std::snprintf(buf, sizeof buf, " %12zu", displayed_median(report.at(f, n).exp_median));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace hlr::app
