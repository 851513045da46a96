// src/app/plot.cpp

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

#include "hlr/app/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "hlr/error.hpp"
#include "hlr/io.hpp"

namespace hlr::app {

namespace {

constexpr double kPanelW = 560, kPanelH = 320;
constexpr double kLeft = 70, kRight = 120, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Series {
  std::vector<const BootstrapResult*> points;  ///< by increasing k
  const BootstrapResult* full = nullptr;
};

}  // namespace

std::string render_task_svg(const SweepResults& results, const TaskInfo& task) {
  // method -> n_ta -> series
  std::map<std::string, std::map<std::size_t, Series>> panels;
  std::vector<std::string> order;
  for (const auto& m : results.methods) order.push_back(m);
  for (const auto& c : results.cells) {
    if (c.task_name != task.name) continue;
    if (std::find(order.begin(), order.end(), c.method) == order.end()) order.push_back(c.method);
    Series& s = panels[c.method][c.n_ta];
    if (task.full_dims && c.k == task.full_dims)
      s.full = &c;
    else
      s.points.push_back(&c);
  }
  order.erase(std::remove_if(order.begin(), order.end(),
                             [&](const std::string& m) { return !panels.count(m); }),
              order.end());

  const double height = kPanelH * static_cast<double>(std::max<std::size_t>(order.size(), 1));
  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kPanelW) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(kPanelW) + " " + num(height) + "\">\n";
  svg += "<title>" + escape(task.name) + "</title>\n";

  for (std::size_t p = 0; p < order.size(); ++p) {
    const std::string& method = order[p];
    auto& by_n = panels[method];
    std::set<std::size_t> ks;
    double lo = INFINITY, hi = -INFINITY;
    for (auto& [n, s] : by_n) {
      std::sort(s.points.begin(), s.points.end(),
                [](auto* a, auto* b) { return a->k < b->k; });
      for (auto* c : s.points) {
        ks.insert(c->k);
        lo = std::min({lo, c->ci_low, c->mean});
        hi = std::max({hi, c->ci_high, c->mean});
      }
      if (s.full) {
        lo = std::min(lo, s.full->mean);
        hi = std::max(hi, s.full->mean);
      }
    }
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-9) lo -= 0.5, hi += 0.5;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const double y0 = kPanelH * static_cast<double>(p);
    const double plot_w = kPanelW - kLeft - kRight;
    const double plot_h = kPanelH - kTop - kBottom;
    double lk_min = ks.empty() ? 0.0 : std::log2(static_cast<double>(*ks.begin()));
    double lk_max = ks.empty() ? 1.0 : std::log2(static_cast<double>(*ks.rbegin()));
    if (lk_max - lk_min < 1e-9) lk_min -= 0.5, lk_max += 0.5;
    auto xpos = [&](std::size_t k) {
      return kLeft + plot_w * (std::log2(static_cast<double>(k)) - lk_min) / (lk_max - lk_min);
    };
    auto ypos = [&](double v) { return y0 + kTop + plot_h * (hi - v) / (hi - lo); };

    svg += "<g class=\"panel\" data-method=\"" + escape(method) + "\">\n";
    svg += "<text x=\"" + num(kLeft) + "\" y=\"" + num(y0 + 24) + "\" font-size=\"14\">" +
           escape(task.name) + " (" + escape(method) + ", " + escape(task.metric) + ")</text>\n";
    svg += "<rect class=\"frame\" x=\"" + num(kLeft) + "\" y=\"" + num(y0 + kTop) + "\" width=\"" +
           num(plot_w) + "\" height=\"" + num(plot_h) + "\" fill=\"none\" stroke=\"#000\"/>\n";
    svg += "<g class=\"x-axis\" data-scale=\"log2\">\n";
    for (auto k : ks) {
      const double x = xpos(k);
      svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(y0 + kTop + plot_h) + "\" x2=\"" + num(x) +
             "\" y2=\"" + num(y0 + kTop + plot_h + 5) + "\" stroke=\"#000\"/>";
      svg += "<text class=\"tick\" x=\"" + num(x) + "\" y=\"" + num(y0 + kTop + plot_h + 18) +
             "\" font-size=\"10\" text-anchor=\"middle\">" + std::to_string(k) + "</text>\n";
    }
    svg += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(y0 + kPanelH - 10) +
           "\" font-size=\"11\" text-anchor=\"middle\">k</text>\n</g>\n";
    svg += "<g class=\"y-axis\">\n";
    for (int i = 0; i <= 4; ++i) {
      const double v = lo + (hi - lo) * i / 4.0;
      svg += "<text class=\"tick\" x=\"" + num(kLeft - 6) + "\" y=\"" + num(ypos(v) + 3) +
             "\" font-size=\"10\" text-anchor=\"end\">" + num(v) + "</text>\n";
    }
    svg += "</g>\n";

    std::size_t color = 0;
    for (auto& [n, s] : by_n) {
      const std::string col = kPalette[color++ % std::size(kPalette)];
      const std::string n_attr = " data-n-ta=\"" + std::to_string(n) + "\"";
      if (!s.points.empty()) {
        std::string band;
        for (auto* c : s.points) band += num(xpos(c->k)) + "," + num(ypos(c->ci_high)) + " ";
        for (auto it = s.points.rbegin(); it != s.points.rend(); ++it)
          band += num(xpos((*it)->k)) + "," + num(ypos((*it)->ci_low)) + " ";
        band.pop_back();
        svg += "<polygon class=\"ci-band\"" + n_attr + " points=\"" + band + "\" fill=\"" + col +
               "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
        std::string line;
        for (auto* c : s.points) line += num(xpos(c->k)) + "," + num(ypos(c->mean)) + " ";
        line.pop_back();
        svg += "<polyline class=\"series\"" + n_attr + " points=\"" + line +
               "\" fill=\"none\" stroke=\"" + col + "\" stroke-width=\"2\"/>\n";
      }
      if (s.full) {
        const double y = ypos(s.full->mean);
        svg += "<line class=\"no-reduction\"" + n_attr + " x1=\"" + num(kLeft) + "\" y1=\"" +
               num(y) + "\" x2=\"" + num(kLeft + plot_w) + "\" y2=\"" + num(y) + "\" stroke=\"" +
               col + "\" stroke-dasharray=\"6,4\"/>\n";
      }
      const double ly = y0 + kTop + 14.0 * static_cast<double>(color);
      svg += "<text class=\"legend\" x=\"" + num(kLeft + plot_w + 10) + "\" y=\"" + num(ly) +
             "\" font-size=\"11\" fill=\"" + col + "\">n_ta=" + std::to_string(n) + "</text>\n";
    }
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<std::filesystem::path> write_plots(const SweepResults& results,
                                               const std::filesystem::path& out_dir,
                                               std::ostream& warn) {
  std::vector<std::filesystem::path> written;
  if (results.cells.empty()) {
    warn << "hlr: warning: results contain no cells; no plots written\n";
    return written;
  }
  std::set<std::string> known;
  for (const auto& t : results.tasks) known.insert(t.name);
  for (const auto& c : results.cells)
    if (!known.count(c.task_name))
      throw DataError("results cell names unknown task '" + c.task_name + "'");
  std::filesystem::create_directories(out_dir);
  for (const auto& t : results.tasks) {
    const bool has_cells = std::any_of(results.cells.begin(), results.cells.end(),
                                       [&](const auto& c) { return c.task_name == t.name; });
    if (!has_cells) continue;
    const auto path = out_dir / (t.name + ".svg");
    io::write_file_atomic(path, render_task_svg(results, t));
    written.push_back(path);
  }
  return written;
}

}  // namespace hlr::app
