// include/hlr/corpus.hpp

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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hlr/matrix.hpp"

namespace hlr {

enum class Level { message, user };
enum class EmbeddingFormat { binary, csv };
enum class OutcomeKind { continuous, binary, multiclass4 };

std::string_view to_string(OutcomeKind kind) noexcept;
OutcomeKind parse_outcome_kind(std::string_view s);
EmbeddingFormat parse_embedding_format(std::string_view s);
/// "csv" when the extension is .csv, binary otherwise.
EmbeddingFormat guess_embedding_format(const std::filesystem::path& path);

/// Ids paired with a row-major float matrix. Message-level tables also carry
/// the owning user of every row in `group_keys`.
struct EmbeddingTable {
  std::vector<std::string> ids;
  MatrixF matrix;
  Level level = Level::user;
  std::vector<std::string> group_keys;

  std::size_t rows() const noexcept { return matrix.rows(); }
  std::size_t dims() const noexcept { return matrix.cols(); }

  /// Throws DataError on duplicate ids, non-finite cells, missing group keys
  /// and ShapeError when the id count disagrees with the matrix.
  void validate() const;
};

/// Outcomes keyed by user id, kept in file order.
struct OutcomeTable {
  std::vector<std::string> ids;
  std::vector<double> values;
  OutcomeKind kind = OutcomeKind::continuous;

  std::size_t size() const noexcept { return ids.size(); }
  void validate() const;
};

struct TaskDataset {
  std::string task_name;
  EmbeddingTable train_features;
  OutcomeTable train_outcomes;
  EmbeddingTable test_features;
  OutcomeTable test_outcomes;

  /// Dims agree, features and outcomes are aligned row for row and the
  /// train/test id sets are disjoint.
  void validate() const;
};

/// Sidecar paths for a binary table: `<path>.ids` and `<path>.groups`.
std::filesystem::path ids_sidecar(const std::filesystem::path& path);
std::filesystem::path groups_sidecar(const std::filesystem::path& path);

EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFormat format);
void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path,
                     EmbeddingFormat format);

/// In-memory codecs behind the file functions. The binary codec covers only
/// the matrix; ids travel in sidecars.
MatrixF decode_ueb1(std::string_view bytes);
std::string encode_ueb1(const MatrixF& matrix);

OutcomeTable load_outcomes(const std::filesystem::path& path, OutcomeKind kind);
OutcomeTable parse_outcomes(std::string_view csv, OutcomeKind kind);
void save_outcomes(const OutcomeTable& table, const std::filesystem::path& path);

struct Aligned {
  EmbeddingTable features;
  OutcomeTable outcomes;
  std::size_t dropped_features = 0;
  std::size_t dropped_outcomes = 0;
};

/// Restrict both tables to the shared ids, in feature-table order.
/// Throws AlignmentError when nothing is shared.
Aligned align(const EmbeddingTable& features, const OutcomeTable& outcomes);

/// Widen a float table to the double matrix used by the numeric modules.
Matrix to_double(const MatrixF& m);

}  // namespace hlr
