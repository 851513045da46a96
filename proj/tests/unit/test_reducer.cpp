// tests/unit/test_reducer.cpp

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

#include <cstring>

#include "hlr/error.hpp"
#include "hlr/io.hpp"
#include "hlr/linalg.hpp"
#include "hlr/reduce/reducer.hpp"
#include "support/synthetic.hpp"

using namespace hlr;

namespace {

const Method kAll[] = {Method::pca, Method::pca_ppa, Method::nmf, Method::fa, Method::nlae};

ReducerOptions quick() {
  ReducerOptions o;
  o.nmf.iterations = 30;
  o.fa.max_iterations = 30;
  o.nlae.max_epochs = 5;
  return o;
}

}  // namespace

TEST_CASE("every method maps in_dims to k and round-trips bit-exactly") {
  Rng rng(3);
  const Matrix x = testing::random_normal(60, 12, rng);
  const Matrix probe = testing::random_normal(7, 12, rng);
  testing::TempDir dir("reducer");
  for (Method m : kAll) {
    CAPTURE(to_string(m));
    const auto model = fit_reducer(m, x, 4, 17, quick());
    CHECK(model.method == m);
    CHECK(model.in_dims == 12);
    CHECK(model.out_dims == 4);
    CHECK(model.meta.n_pretrain_rows == 60);
    const Matrix z = transform(model, probe);
    CHECK(z.rows() == 7);
    CHECK(z.cols() == 4);
    CHECK(transform(model, probe) == z);  // no randomness at apply time

    const auto path = dir / (std::string(to_string(m)) + ".edr");
    save_reducer(model, path);
    const auto back = load_reducer(path);
    CHECK(back.method == m);
    CHECK(back.meta.seed == model.meta.seed);
    CHECK(back.meta.iterations_run == model.meta.iterations_run);
    CHECK(transform(back, probe) == z);
    CHECK(encode_reducer(back) == encode_reducer(model));

    CHECK(transform(model, Matrix(0, 12)).cols() == 4);
    CHECK(transform(model, Matrix(0, 12)).rows() == 0);
    CHECK_THROWS_AS(transform(model, Matrix(2, 11)), ShapeError);
  }
}

TEST_CASE("fits are reproducible for a seed") {
  Rng rng(5);
  const Matrix x = testing::random_normal(40, 8, rng);
  for (Method m : kAll) {
    CAPTURE(to_string(m));
    CHECK(encode_reducer(fit_reducer(m, x, 3, 9, quick())) ==
          encode_reducer(fit_reducer(m, x, 3, 9, quick())));
  }
}

TEST_CASE("pca_ppa composition sizes") {
  Rng rng(8);
  const Matrix x = testing::random_normal(400, 300, rng);
  const auto model = fit_pca_ppa(x, 128);
  const auto& p = std::get<PcaPpaParams>(model.params);
  CHECK(p.pre.top_components.rows() == 3);
  CHECK(p.pca.components.rows() == 128);
  CHECK(p.post.top_components.rows() == 1);
  const auto small = fit_pca_ppa(x, 64);
  CHECK(std::get<PcaPpaParams>(small.params).post.top_components.rows() == 0);
}

TEST_CASE("pca transform of the mean is zero") {
  Rng rng(2);
  const Matrix x = testing::random_normal(30, 5, rng);
  const auto model = fit_pca(x, 2);
  const Matrix mean(1, 5, std::get<PcaParams>(model.params).mean);
  const Matrix z = transform(model, mean);
  for (double v : z.values()) CHECK(v == 0.0);
}

TEST_CASE("table transform keeps ids") {
  Rng rng(4);
  EmbeddingTable t;
  t.ids = {"a", "b", "c"};
  t.matrix = testing::random_normal(3, 6, rng).cast<float>();
  const auto model = fit_pca(testing::random_normal(20, 6, rng), 2);
  const auto out = transform(model, t);
  CHECK(out.ids == t.ids);
  CHECK(out.dims() == 2);
  CHECK(out.level == Level::user);
}

TEST_CASE("corrupt reducer files") {
  Rng rng(1);
  const auto model = fit_pca(testing::random_normal(10, 4, rng), 2);
  const std::string bytes = encode_reducer(model);
  CHECK(bytes.substr(0, 4) == "EDR1");
  CHECK_THROWS_AS(decode_reducer(bytes.substr(0, bytes.size() - 3)), FormatError);
  CHECK_THROWS_AS(decode_reducer(bytes.substr(0, 6)), FormatError);
  CHECK_THROWS_AS(decode_reducer(bytes + "x"), FormatError);
  std::string bad_magic = bytes;
  bad_magic[3] = '2';
  CHECK_THROWS_AS(decode_reducer(bad_magic), FormatError);

  std::string next = bytes;
  const std::uint32_t v2 = 2;
  std::memcpy(next.data() + 4, &v2, 4);
  try {
    decode_reducer(next);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("version 2") != std::string::npos);
  }

  std::string bad_tag = bytes;
  bad_tag[8] = 9;
  CHECK_THROWS_AS(decode_reducer(bad_tag), FormatError);
}

TEST_CASE("method names") {
  for (Method m : kAll) CHECK(parse_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_method("ica"), ConfigError);
}
