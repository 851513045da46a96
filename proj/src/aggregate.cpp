// src/aggregate.cpp

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

#include "hlr/aggregate.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "hlr/error.hpp"
#include "hlr/rng.hpp"

namespace hlr {

EmbeddingTable aggregate_users(const EmbeddingTable& messages, const AggregationConfig& cfg) {
  if (messages.level != Level::message) throw DataError("aggregate_users needs message-level rows");
  if (messages.rows() == 0) throw DataError("no messages to aggregate");
  if (cfg.message_cap && *cfg.message_cap == 0) throw ConfigError("message_cap must be >= 1");
  messages.validate();

  // std::map gives the sorted user order directly.
  std::map<std::string, std::vector<std::size_t>> by_user;
  for (std::size_t r = 0; r < messages.rows(); ++r) by_user[messages.group_keys[r]].push_back(r);

  const std::size_t dims = messages.dims();
  EmbeddingTable out;
  out.level = Level::user;
  out.matrix = MatrixF(by_user.size(), dims);
  out.ids.reserve(by_user.size());

  std::vector<double> acc(dims);
  std::size_t u = 0;
  for (auto& [user, rows] : by_user) {
    std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
      return messages.ids[a] < messages.ids[b];
    });
    if (cfg.message_cap && rows.size() > *cfg.message_cap) {
      // Partial Fisher-Yates, then restore id order for the summation.
      Rng rng(derive_seed(cfg.seed, user));
      const std::size_t cap = *cfg.message_cap;
      for (std::size_t i = 0; i < cap; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(rows.size() - i));
        std::swap(rows[i], rows[j]);
      }
      rows.resize(cap);
      std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
        return messages.ids[a] < messages.ids[b];
      });
    }
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t r : rows) {
      auto src = messages.matrix.row(r);
      for (std::size_t c = 0; c < dims; ++c) acc[c] += static_cast<double>(src[c]);
    }
    auto dst = out.matrix.row(u);
    const auto count = static_cast<double>(rows.size());
    for (std::size_t c = 0; c < dims; ++c) dst[c] = static_cast<float>(acc[c] / count);
    out.ids.push_back(user);
    ++u;
  }
  return out;
}

}  // namespace hlr
