// include/hlr/reduce/reducer.hpp

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
#include <string>
#include <string_view>
#include <variant>

#include "hlr/corpus.hpp"
#include "hlr/matrix.hpp"
#include "hlr/reduce/fa.hpp"
#include "hlr/reduce/nlae.hpp"
#include "hlr/reduce/nmf.hpp"
#include "hlr/reduce/pca.hpp"

namespace hlr {

enum class Method : std::uint8_t { pca = 0, pca_ppa = 1, nmf = 2, fa = 3, nlae = 4 };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view s);

/// PPA -> PCA -> PPA, each stage fitted on the previous stage's output.
struct PcaPpaParams {
  PpaParams pre;
  PcaParams pca;
  PpaParams post;
};

using ReducerParams = std::variant<PcaParams, PcaPpaParams, NmfParams, FaParams, NlaeParams>;

struct FitMeta {
  std::uint64_t n_pretrain_rows = 0;
  std::uint64_t seed = 0;
  std::uint64_t iterations_run = 0;
  double final_objective = 0.0;
  /// FA noise variances clamped to the floor; zero for other methods.
  std::uint64_t clamped = 0;
};

struct ReducerModel {
  Method method = Method::pca;
  std::size_t in_dims = 0;
  std::size_t out_dims = 0;
  ReducerParams params;
  FitMeta meta;
};

struct ReducerOptions {
  PcaOptions pca;
  NmfOptions nmf;
  FaOptions fa;
  NlaeOptions nlae;
};

/// Fit `method` to the pre-training rows. `seed` overrides the per-method
/// seeds in `opts`.
ReducerModel fit_reducer(Method method, const Matrix& x, std::size_t k, std::uint64_t seed,
                         const ReducerOptions& opts = {});

ReducerModel fit_pca(const Matrix& x, std::size_t k, const PcaOptions& opts = {});
ReducerModel fit_pca_ppa(const Matrix& x, std::size_t k, const PcaOptions& opts = {});
ReducerModel fit_nmf(const Matrix& x, std::size_t k, const NmfOptions& opts = {});
ReducerModel fit_fa(const Matrix& x, std::size_t k, const FaOptions& opts = {});
ReducerModel fit_nlae(const Matrix& x, std::size_t k, const NlaeOptions& opts = {});

/// Row-wise application of the fitted transform. Throws ShapeError when
/// x.cols() != model.in_dims.
Matrix transform(const ReducerModel& model, const Matrix& x);
EmbeddingTable transform(const ReducerModel& model, const EmbeddingTable& table);

// EDR1 container, all integers and floats little-endian:
//
//   "EDR1"  u32 version  u8 method  u32 in_dims  u32 out_dims
//   u64 n_pretrain_rows  u64 seed  u64 iterations_run  f64 final_objective
//   u64 clamped  u32 block_count
//   block_count x { u32 rows  u32 cols  rows*cols f64 row-major }
//
// Block order per method:
//   pca      mean(1xd) components(kxd) singular_values(1xk)
//   pca_ppa  pre.mean pre.top  pca.mean pca.components pca.singular_values
//            post.mean post.top
//   nmf      dictionary(kxd) column_shift(1xd)
//   fa       loadings(dxk) noise_diag(1xd) mean(1xd)
//   nlae     w1 b1 w2 b2 dec_w2 dec_b2 dec_w1 dec_b1 (vectors as 1xn)
inline constexpr std::uint32_t kReducerFormatVersion = 1;

std::string encode_reducer(const ReducerModel& model);
ReducerModel decode_reducer(std::string_view bytes);
void save_reducer(const ReducerModel& model, const std::filesystem::path& path);
ReducerModel load_reducer(const std::filesystem::path& path);

}  // namespace hlr
