// src/corpus.cpp

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

#include "hlr/corpus.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "hlr/error.hpp"
#include "hlr/io.hpp"

namespace hlr {
namespace {

static_assert(std::endian::native == std::endian::little,
              "UEB1 codec assumes a little-endian host");

constexpr char kUebMagic[4] = {'U', 'E', 'B', '1'};

std::uint32_t read_u32(const char* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    start = end + 1;
  }
  return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

float parse_float_cell(std::string_view cell, std::size_t row) {
  cell = io::trim(cell);
  float v = 0.0f;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size())
    throw DataError("unparseable value '" + std::string(cell) + "'", row);
  if (!std::isfinite(v)) throw DataError("non-finite value", row);
  return v;
}

void check_outcome_value(double v, OutcomeKind kind, std::size_t row) {
  if (!std::isfinite(v)) throw DataError("non-finite outcome", row);
  if (kind == OutcomeKind::binary && v != 0.0 && v != 1.0)
    throw DataError("binary outcome must be 0 or 1", row);
  if (kind == OutcomeKind::multiclass4 && v != 0.0 && v != 1.0 && v != 2.0 && v != 3.0)
    throw DataError("multiclass4 outcome must be one of 0,1,2,3", row);
}

EmbeddingTable load_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw FormatError(path.string() + ": empty file");
  const auto header = io::split(lines[0], ',');
  if (header.empty() || io::trim(header[0]) != "id")
    throw FormatError(path.string() + ": header must start with 'id'");
  const bool grouped = header.size() > 1 && io::trim(header[1]) == "group";
  const std::size_t first_value = grouped ? 2 : 1;
  const std::size_t dims = header.size() - first_value;
  if (dims == 0) throw FormatError(path.string() + ": header declares no value columns");
  for (std::size_t c = first_value; c < header.size(); ++c)
    if (io::trim(header[c]) != "d" + std::to_string(c - first_value))
      throw FormatError(path.string() + ": value column " + std::to_string(c - first_value) +
                        " must be named d" + std::to_string(c - first_value));

  EmbeddingTable t;
  t.level = grouped ? Level::message : Level::user;
  std::vector<float> values;
  std::size_t row = 0;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (io::trim(lines[li]).empty()) continue;
    const auto cells = io::split(lines[li], ',');
    if (cells.size() != header.size())
      throw FormatError(path.string() + ": row " + std::to_string(row) + " has " +
                        std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(header.size()));
    t.ids.emplace_back(io::trim(cells[0]));
    if (grouped) t.group_keys.emplace_back(io::trim(cells[1]));
    for (std::size_t c = first_value; c < cells.size(); ++c)
      values.push_back(parse_float_cell(cells[c], row));
    ++row;
  }
  t.matrix = MatrixF(row, dims, std::move(values));
  return t;
}

EmbeddingTable load_binary(const std::filesystem::path& path) {
  EmbeddingTable t;
  t.matrix = decode_ueb1(io::read_file(path));
  const auto ids_path = ids_sidecar(path);
  if (!std::filesystem::exists(ids_path))
    throw FormatError(path.string() + ": missing id sidecar " + ids_path.string());
  t.ids = read_lines(ids_path);
  if (t.ids.size() != t.matrix.rows())
    throw FormatError(ids_path.string() + ": " + std::to_string(t.ids.size()) +
                      " ids for " + std::to_string(t.matrix.rows()) + " rows");
  const auto groups_path = groups_sidecar(path);
  if (std::filesystem::exists(groups_path)) {
    t.level = Level::message;
    t.group_keys = read_lines(groups_path);
    if (t.group_keys.size() != t.matrix.rows())
      throw FormatError(groups_path.string() + ": " + std::to_string(t.group_keys.size()) +
                        " group keys for " + std::to_string(t.matrix.rows()) + " rows");
  }
  return t;
}

}  // namespace

std::string_view to_string(OutcomeKind kind) noexcept {
  switch (kind) {
    case OutcomeKind::continuous:
      return "continuous";
    case OutcomeKind::binary:
      return "binary";
    case OutcomeKind::multiclass4:
      return "multiclass4";
  }
  return "continuous";
}

OutcomeKind parse_outcome_kind(std::string_view s) {
  if (s == "continuous") return OutcomeKind::continuous;
  if (s == "binary") return OutcomeKind::binary;
  if (s == "multiclass4") return OutcomeKind::multiclass4;
  throw ConfigError("unknown outcome kind '" + std::string(s) + "'");
}

EmbeddingFormat parse_embedding_format(std::string_view s) {
  if (s == "binary") return EmbeddingFormat::binary;
  if (s == "csv") return EmbeddingFormat::csv;
  throw ConfigError("unknown embedding format '" + std::string(s) + "'");
}

EmbeddingFormat guess_embedding_format(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? EmbeddingFormat::csv : EmbeddingFormat::binary;
}

void EmbeddingTable::validate() const {
  if (ids.size() != matrix.rows())
    throw ShapeError(std::to_string(ids.size()) + " ids for " + std::to_string(matrix.rows()) +
                     " rows");
  if (matrix.cols() == 0) throw DataError("embedding table has zero dimensions");
  std::unordered_set<std::string_view> seen;
  seen.reserve(ids.size());
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (!seen.insert(ids[r]).second) throw DataError("duplicate id '" + ids[r] + "'", r);
    for (float v : matrix.row(r))
      if (!std::isfinite(v)) throw DataError("non-finite value", r);
  }
  if (level == Level::message) {
    if (group_keys.size() != ids.size())
      throw DataError("message-level table needs one group key per row");
    for (std::size_t r = 0; r < group_keys.size(); ++r)
      if (group_keys[r].empty()) throw DataError("empty group key", r);
  } else if (!group_keys.empty()) {
    throw DataError("user-level table must not carry group keys");
  }
}

void OutcomeTable::validate() const {
  if (ids.size() != values.size()) throw ShapeError("outcome ids and values differ in length");
  std::unordered_set<std::string_view> seen;
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (!seen.insert(ids[r]).second) throw DataError("duplicate user id '" + ids[r] + "'", r);
    check_outcome_value(values[r], kind, r);
  }
}

void TaskDataset::validate() const {
  train_features.validate();
  test_features.validate();
  train_outcomes.validate();
  test_outcomes.validate();
  if (train_features.level != Level::user || test_features.level != Level::user)
    throw DataError(task_name + ": task features must be user-level");
  if (train_features.dims() != test_features.dims())
    throw ShapeError(task_name + ": train and test feature dims differ");
  if (train_features.ids != train_outcomes.ids || test_features.ids != test_outcomes.ids)
    throw AlignmentError(task_name + ": features and outcomes are not aligned");
  std::unordered_set<std::string_view> train_ids(train_features.ids.begin(),
                                                 train_features.ids.end());
  for (const auto& id : test_features.ids)
    if (train_ids.count(id)) throw DataError(task_name + ": user '" + id + "' in train and test");
}

std::filesystem::path ids_sidecar(const std::filesystem::path& path) {
  auto p = path;
  p += ".ids";
  return p;
}

std::filesystem::path groups_sidecar(const std::filesystem::path& path) {
  auto p = path;
  p += ".groups";
  return p;
}

MatrixF decode_ueb1(std::string_view bytes) {
  if (bytes.size() < 12) throw FormatError("UEB1: truncated header");
  if (std::memcmp(bytes.data(), kUebMagic, 4) != 0) throw FormatError("UEB1: bad magic");
  const std::uint64_t rows = read_u32(bytes.data() + 4);
  const std::uint64_t cols = read_u32(bytes.data() + 8);
  const std::uint64_t expected = 12 + rows * cols * 4;
  if (bytes.size() != expected)
    throw FormatError("UEB1: expected " + std::to_string(expected) + " bytes, found " +
                      std::to_string(bytes.size()));
  MatrixF m(rows, cols);
  if (rows * cols != 0) std::memcpy(m.data(), bytes.data() + 12, rows * cols * 4);
  return m;
}

std::string encode_ueb1(const MatrixF& matrix) {
  std::string out;
  out.reserve(12 + matrix.size() * 4);
  out.append(kUebMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(matrix.rows()));
  put_u32(out, static_cast<std::uint32_t>(matrix.cols()));
  out.append(reinterpret_cast<const char*>(matrix.data()), matrix.size() * 4);
  return out;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
  if (!std::filesystem::exists(path)) throw DataError("no such file: " + path.string());
  EmbeddingTable t = format == EmbeddingFormat::csv ? load_csv(path) : load_binary(path);
  t.validate();
  return t;
}

void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path,
                     EmbeddingFormat format) {
  table.validate();
  if (format == EmbeddingFormat::binary) {
    io::write_file_atomic(path, encode_ueb1(table.matrix));
    io::write_file_atomic(ids_sidecar(path), join_lines(table.ids));
    if (table.level == Level::message)
      io::write_file_atomic(groups_sidecar(path), join_lines(table.group_keys));
    else
      std::filesystem::remove(groups_sidecar(path));
    return;
  }
  std::string out = table.level == Level::message ? "id,group" : "id";
  for (std::size_t c = 0; c < table.dims(); ++c) out += ",d" + std::to_string(c);
  out += '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    out += table.ids[r];
    if (table.level == Level::message) out += "," + table.group_keys[r];
    for (float v : table.matrix.row(r)) {
      out += ',';
      out += io::format_float(v);
    }
    out += '\n';
  }
  io::write_file_atomic(path, out);
}

OutcomeTable parse_outcomes(std::string_view csv, OutcomeKind kind) {
  OutcomeTable t;
  t.kind = kind;
  std::size_t start = 0;
  bool header_seen = false;
  std::size_t row = 0;
  while (start < csv.size()) {
    auto end = csv.find('\n', start);
    if (end == std::string_view::npos) end = csv.size();
    const auto line = io::trim(csv.substr(start, end - start));
    start = end + 1;
    if (line.empty()) continue;
    const auto cells = io::split(line, ',');
    if (!header_seen) {
      if (cells.size() != 2 || io::trim(cells[0]) != "user_id" || io::trim(cells[1]) != "value")
        throw FormatError("outcomes header must be 'user_id,value'");
      header_seen = true;
      continue;
    }
    if (cells.size() != 2) throw DataError("expected 2 cells", row);
    const auto id = io::trim(cells[0]);
    const auto cell = io::trim(cells[1]);
    if (id.empty()) throw DataError("missing user id", row);
    if (cell.empty()) throw DataError("missing value", row);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
      throw DataError("unparseable value '" + std::string(cell) + "'", row);
    check_outcome_value(v, kind, row);
    t.ids.emplace_back(id);
    t.values.push_back(v);
    ++row;
  }
  if (!header_seen) throw FormatError("outcomes file is empty");
  t.validate();
  return t;
}

OutcomeTable load_outcomes(const std::filesystem::path& path, OutcomeKind kind) {
  if (!std::filesystem::exists(path)) throw DataError("no such file: " + path.string());
  try {
    return parse_outcomes(io::read_file(path), kind);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_outcomes(const OutcomeTable& table, const std::filesystem::path& path) {
  std::string out = "user_id,value\n";
  for (std::size_t i = 0; i < table.size(); ++i)
    out += table.ids[i] + "," + io::format_double(table.values[i]) + "\n";
  io::write_file_atomic(path, out);
}

Aligned align(const EmbeddingTable& features, const OutcomeTable& outcomes) {
  if (features.level != Level::user) throw DataError("align needs user-level features");
  std::unordered_map<std::string_view, std::size_t> outcome_index;
  outcome_index.reserve(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) outcome_index.emplace(outcomes.ids[i], i);

  std::vector<std::size_t> keep;
  Aligned out;
  out.outcomes.kind = outcomes.kind;
  for (std::size_t r = 0; r < features.rows(); ++r) {
    auto it = outcome_index.find(features.ids[r]);
    if (it == outcome_index.end()) continue;
    keep.push_back(r);
    out.outcomes.ids.push_back(features.ids[r]);
    out.outcomes.values.push_back(outcomes.values[it->second]);
  }
  if (keep.empty()) throw AlignmentError("features and outcomes share no ids");
  out.features.level = Level::user;
  out.features.matrix = features.matrix.gather_rows(keep);
  out.features.ids = out.outcomes.ids;
  out.dropped_features = features.rows() - keep.size();
  out.dropped_outcomes = outcomes.size() - keep.size();
  return out;
}

Matrix to_double(const MatrixF& m) { return m.cast<double>(); }

}  // namespace hlr
