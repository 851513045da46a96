// src/reduce/reducer_io.cpp

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

#include <bit>
#include <cstring>

#include "hlr/error.hpp"
#include "hlr/io.hpp"
#include "hlr/reduce/reducer.hpp"

namespace hlr {
namespace {

static_assert(std::endian::native == std::endian::little,
              "EDR1 codec assumes a little-endian host");

constexpr char kMagic[4] = {'E', 'D', 'R', '1'};

class Writer {
 public:
  template <typename T>
  void put(T v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    out_.append(b, sizeof(T));
  }
  void raw(const char* p, std::size_t n) { out_.append(p, n); }
  void block(const Matrix& m) {
    put<std::uint32_t>(static_cast<std::uint32_t>(m.rows()));
    put<std::uint32_t>(static_cast<std::uint32_t>(m.cols()));
    raw(reinterpret_cast<const char*>(m.data()), m.size() * sizeof(double));
    ++blocks_;
  }
  void block(const Vector& v) { block(Matrix(1, v.size(), v)); }
  std::string finish(std::size_t block_count_offset) {
    auto count = static_cast<std::uint32_t>(blocks_);
    std::memcpy(out_.data() + block_count_offset, &count, sizeof(count));
    return std::move(out_);
  }
  std::size_t size() const { return out_.size(); }

 private:
  std::string out_;
  std::size_t blocks_ = 0;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  Matrix matrix() {
    const std::uint64_t rows = get<std::uint32_t>();
    const std::uint64_t cols = get<std::uint32_t>();
    need(rows * cols * sizeof(double));
    Matrix m(rows, cols);
    if (m.size()) std::memcpy(m.data(), bytes_.data() + pos_, m.size() * sizeof(double));
    pos_ += m.size() * sizeof(double);
    return m;
  }
  Matrix matrix(std::size_t rows, std::size_t cols, const char* what) {
    Matrix m = matrix();
    if (m.rows() != rows || m.cols() != cols)
      throw FormatError(std::string("EDR1: block '") + what + "' has shape " +
                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                        ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    return m;
  }
  Vector vector(std::size_t n, const char* what) {
    Matrix m = matrix(1, n, what);
    return {m.values().begin(), m.values().end()};
  }
  Matrix rows_of(std::size_t cols, const char* what) {
    Matrix m = matrix();
    if (m.cols() != cols && !(m.rows() == 0))
      throw FormatError(std::string("EDR1: block '") + what + "' has wrong width");
    return m.rows() == 0 ? Matrix(0, cols) : m;
  }
  void expect_end() const {
    if (pos_ != bytes_.size()) throw FormatError("EDR1: trailing bytes after last block");
  }

 private:
  void need(std::uint64_t n) const {
    if (pos_ + n > bytes_.size()) throw FormatError("EDR1: truncated payload");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void write_ppa(Writer& w, const PpaParams& p) {
  w.block(p.mean);
  w.block(p.top_components);
}

PpaParams read_ppa(Reader& r, std::size_t dims) {
  PpaParams p;
  p.mean = r.vector(dims, "ppa.mean");
  p.top_components = r.rows_of(dims, "ppa.top_components");
  return p;
}

void write_pca(Writer& w, const PcaParams& p) {
  w.block(p.mean);
  w.block(p.components);
  w.block(p.singular_values);
}

PcaParams read_pca(Reader& r, std::size_t in, std::size_t out) {
  PcaParams p;
  p.mean = r.vector(in, "pca.mean");
  p.components = r.matrix(out, in, "pca.components");
  p.singular_values = r.vector(out, "pca.singular_values");
  return p;
}

}  // namespace

std::string encode_reducer(const ReducerModel& model) {
  Writer w;
  w.raw(kMagic, 4);
  w.put<std::uint32_t>(kReducerFormatVersion);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(model.method));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.in_dims));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.out_dims));
  w.put<std::uint64_t>(model.meta.n_pretrain_rows);
  w.put<std::uint64_t>(model.meta.seed);
  w.put<std::uint64_t>(model.meta.iterations_run);
  w.put<double>(model.meta.final_objective);
  w.put<std::uint64_t>(model.meta.clamped);
  const std::size_t count_at = w.size();
  w.put<std::uint32_t>(0);

  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PcaParams>) {
          write_pca(w, p);
        } else if constexpr (std::is_same_v<T, PcaPpaParams>) {
          write_ppa(w, p.pre);
          write_pca(w, p.pca);
          write_ppa(w, p.post);
        } else if constexpr (std::is_same_v<T, NmfParams>) {
          w.block(p.dictionary);
          w.block(p.column_shift);
        } else if constexpr (std::is_same_v<T, FaParams>) {
          w.block(p.loadings);
          w.block(p.noise_diag);
          w.block(p.mean);
        } else {
          w.block(p.w1);
          w.block(p.b1);
          w.block(p.w2);
          w.block(p.b2);
          w.block(p.dec_w2);
          w.block(p.dec_b2);
          w.block(p.dec_w1);
          w.block(p.dec_b1);
        }
      },
      model.params);
  return w.finish(count_at);
}

ReducerModel decode_reducer(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw FormatError("EDR1: bad magic");
  Reader r(bytes.substr(4));
  const auto version = r.get<std::uint32_t>();
  if (version != kReducerFormatVersion)
    throw FormatError("EDR1: unsupported format version " + std::to_string(version) +
                      " (this build reads version " + std::to_string(kReducerFormatVersion) +
                      ")");
  const auto tag = r.get<std::uint8_t>();
  if (tag > static_cast<std::uint8_t>(Method::nlae))
    throw FormatError("EDR1: unknown method tag " + std::to_string(tag));

  ReducerModel m;
  m.method = static_cast<Method>(tag);
  m.in_dims = r.get<std::uint32_t>();
  m.out_dims = r.get<std::uint32_t>();
  if (m.out_dims == 0 || m.out_dims > m.in_dims) throw FormatError("EDR1: invalid dims");
  m.meta.n_pretrain_rows = r.get<std::uint64_t>();
  m.meta.seed = r.get<std::uint64_t>();
  m.meta.iterations_run = r.get<std::uint64_t>();
  m.meta.final_objective = r.get<double>();
  m.meta.clamped = r.get<std::uint64_t>();
  const auto blocks = r.get<std::uint32_t>();

  const std::size_t in = m.in_dims;
  const std::size_t out = m.out_dims;
  std::uint32_t expected = 0;
  switch (m.method) {
    case Method::pca:
      expected = 3;
      m.params = read_pca(r, in, out);
      break;
    case Method::pca_ppa: {
      expected = 7;
      PcaPpaParams p;
      p.pre = read_ppa(r, in);
      p.pca = read_pca(r, in, out);
      p.post = read_ppa(r, out);
      m.params = std::move(p);
      break;
    }
    case Method::nmf: {
      expected = 2;
      NmfParams p;
      p.dictionary = r.matrix(out, in, "nmf.dictionary");
      p.column_shift = r.vector(in, "nmf.column_shift");
      m.params = std::move(p);
      break;
    }
    case Method::fa: {
      expected = 3;
      FaParams p;
      p.loadings = r.matrix(in, out, "fa.loadings");
      p.noise_diag = r.vector(in, "fa.noise_diag");
      p.mean = r.vector(in, "fa.mean");
      m.params = std::move(p);
      break;
    }
    case Method::nlae: {
      expected = 8;
      NlaeParams p;
      p.w1 = r.matrix();
      const std::size_t h = p.w1.cols();
      if (p.w1.rows() != in) throw FormatError("EDR1: nlae.w1 has wrong shape");
      p.b1 = r.vector(h, "nlae.b1");
      p.w2 = r.matrix(h, out, "nlae.w2");
      p.b2 = r.vector(out, "nlae.b2");
      p.dec_w2 = r.matrix(out, h, "nlae.dec_w2");
      p.dec_b2 = r.vector(h, "nlae.dec_b2");
      p.dec_w1 = r.matrix(h, in, "nlae.dec_w1");
      p.dec_b1 = r.vector(in, "nlae.dec_b1");
      m.params = std::move(p);
      break;
    }
  }
  if (blocks != expected)
    throw FormatError("EDR1: " + std::to_string(blocks) + " blocks, expected " +
                      std::to_string(expected));
  r.expect_end();
  return m;
}

void save_reducer(const ReducerModel& model, const std::filesystem::path& path) {
  io::write_file_atomic(path, encode_reducer(model));
}

ReducerModel load_reducer(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("no such file: " + path.string());
  try {
    return decode_reducer(io::read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace hlr
