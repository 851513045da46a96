// tests/unit/test_aggregate.cpp

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

#include "hlr/aggregate.hpp"
#include "hlr/error.hpp"
#include "support/synthetic.hpp"

using namespace hlr;

namespace {

EmbeddingTable messages(std::vector<std::string> ids, std::vector<std::string> groups,
                        std::size_t dims, std::vector<float> values) {
  EmbeddingTable t;
  t.ids = std::move(ids);
  t.group_keys = std::move(groups);
  t.level = Level::message;
  t.matrix = MatrixF(t.ids.size(), dims, std::move(values));
  return t;
}

}  // namespace

TEST_CASE("single message is returned unchanged") {
  const auto out = aggregate_users(messages({"m1"}, {"u1"}, 3, {0.1f, 0.2f, 0.3f}), {});
  REQUIRE(out.rows() == 1);
  CHECK(out.ids[0] == "u1");
  CHECK(out.level == Level::user);
  CHECK(out.matrix(0, 0) == 0.1f);
  CHECK(out.matrix(0, 2) == 0.3f);
}

TEST_CASE("two point mean") {
  const auto out = aggregate_users(messages({"m1", "m2"}, {"u1", "u1"}, 2, {1, 0, 0, 1}), {});
  CHECK(out.matrix(0, 0) == 0.5f);
  CHECK(out.matrix(0, 1) == 0.5f);
}

TEST_CASE("capped identical messages average to the message, deterministically") {
  std::vector<std::string> ids, groups;
  std::vector<float> vals;
  for (int i = 0; i < 25; ++i) {
    ids.push_back("m" + std::to_string(i));
    groups.push_back("u1");
    vals.insert(vals.end(), {0.1f, 0.7f, -3.3f});
  }
  const auto t = messages(ids, groups, 3, vals);
  AggregationConfig cfg{20, 99};
  const auto a = aggregate_users(t, cfg);
  const auto b = aggregate_users(t, cfg);
  CHECK(a.matrix == b.matrix);
  CHECK(a.matrix(0, 0) == 0.1f);
  CHECK(a.matrix(0, 1) == 0.7f);
  CHECK(a.matrix(0, 2) == -3.3f);
}

TEST_CASE("output ids are sorted and rows are permutation invariant") {
  Rng rng(2);
  std::vector<std::string> ids, groups;
  std::vector<float> vals;
  for (int i = 0; i < 40; ++i) {
    ids.push_back("m" + std::to_string(i));
    groups.push_back("u" + std::to_string(i % 7));
    for (int d = 0; d < 4; ++d) vals.push_back(static_cast<float>(rng.normal()));
  }
  const auto t = messages(ids, groups, 4, vals);
  const auto base = aggregate_users(t, {});
  CHECK(std::is_sorted(base.ids.begin(), base.ids.end()));
  CHECK(base.rows() == 7);

  std::vector<std::size_t> perm(40);
  for (std::size_t i = 0; i < 40; ++i) perm[i] = (i * 17 + 5) % 40;
  EmbeddingTable shuffled;
  shuffled.level = Level::message;
  shuffled.matrix = t.matrix.gather_rows(perm);
  for (auto p : perm) {
    shuffled.ids.push_back(t.ids[p]);
    shuffled.group_keys.push_back(t.group_keys[p]);
  }
  CHECK(aggregate_users(shuffled, {}).matrix == base.matrix);

  // Envelope property.
  for (std::size_t u = 0; u < base.rows(); ++u)
    for (std::size_t d = 0; d < 4; ++d) {
      float lo = 1e30f, hi = -1e30f;
      for (std::size_t m = 0; m < 40; ++m)
        if (t.group_keys[m] == base.ids[u]) {
          lo = std::min(lo, t.matrix(m, d));
          hi = std::max(hi, t.matrix(m, d));
        }
      CHECK(base.matrix(u, d) >= lo);
      CHECK(base.matrix(u, d) <= hi);
    }

  // A cap at or above every user's count changes nothing.
  CHECK(aggregate_users(t, {6, 1}).matrix == base.matrix);
  CHECK(aggregate_users(t, {1000, 1}).matrix == base.matrix);
}

TEST_CASE("cap draws a stable per-user subset") {
  std::vector<std::string> ids, groups;
  std::vector<float> vals;
  for (int i = 0; i < 30; ++i) {
    ids.push_back("m" + std::to_string(i));
    groups.push_back(i < 15 ? "a" : "b");
    vals.push_back(static_cast<float>(i));
  }
  const auto full = messages(ids, groups, 1, vals);
  // Dropping user b leaves user a's capped mean untouched.
  std::vector<std::size_t> only_a(15);
  for (std::size_t i = 0; i < 15; ++i) only_a[i] = i;
  auto part = messages(std::vector<std::string>(ids.begin(), ids.begin() + 15),
                       std::vector<std::string>(groups.begin(), groups.begin() + 15), 1,
                       std::vector<float>(vals.begin(), vals.begin() + 15));
  const auto a_full = aggregate_users(full, {5, 77});
  const auto a_part = aggregate_users(part, {5, 77});
  CHECK(a_full.matrix(0, 0) == a_part.matrix(0, 0));
  CHECK(aggregate_users(full, {5, 78}).matrix != a_full.matrix);
}

TEST_CASE("aggregation rejects bad input") {
  CHECK_THROWS_AS(aggregate_users(messages({}, {}, 2, {}), {}), DataError);
  EmbeddingTable u;
  u.ids = {"u1"};
  u.matrix = MatrixF(1, 2);
  CHECK_THROWS_AS(aggregate_users(u, {}), DataError);
  CHECK_THROWS_AS(aggregate_users(messages({"m1"}, {"u1"}, 1, {1}), {0, 1}), ConfigError);
}
