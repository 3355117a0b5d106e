// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sketchlab/matrix.hpp"

namespace sketchlab {

// Matrix Market coordinate reader. Accepts real/integer/pattern fields and
// general/symmetric structure; symmetric files are expanded.
inline CsrMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::int64_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty input, missing %%MatrixMarket banner", 1);
  ++lineno;
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", lineno);
  auto lower = [](std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix" || format != "coordinate")
    throw ParseError("only 'matrix coordinate' files are supported", lineno);
  if (field != "real" && field != "integer" && field != "pattern" && field != "double")
    throw ParseError("unsupported field '" + field + "'", lineno);
  if (symmetry != "general" && symmetry != "symmetric")
    throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);
  const bool pattern = field == "pattern";
  const bool symmetric = symmetry == "symmetric";

  index_t nrows = -1, ncols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ss(line);
    if (!(ss >> nrows >> ncols >> nnz) || nrows < 0 || ncols < 0 || nnz < 0)
      throw ParseError("malformed size line", lineno);
    break;
  }
  if (nnz < 0) throw ParseError("missing size line", lineno);

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(std::min<index_t>(symmetric ? 2 * nnz : nnz, index_t{1} << 24)));
  index_t seen = 0;
  while (seen < nnz && std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ss(line);
    index_t i = 0, j = 0;
    double v = 1.0;
    if (!(ss >> i >> j) || (!pattern && !(ss >> v))) throw ParseError("malformed entry", lineno);
    if (i < 1 || i > nrows || j < 1 || j > ncols)
      throw ParseError("entry (" + std::to_string(i) + "," + std::to_string(j) + ") outside dimensions", lineno);
    triplets.push_back({i - 1, j - 1, v});
    if (symmetric && i != j) triplets.push_back({j - 1, i - 1, v});
    ++seen;
  }
  if (seen != nnz)
    throw ParseError("expected " + std::to_string(nnz) + " entries, found " + std::to_string(seen), lineno);
  return csr_from_triplets(nrows, ncols, std::move(triplets));
}

inline CsrMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_matrix_market(in);
}

inline void write_matrix_market(std::ostream& out, const CsrView& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.nrows << ' ' << a.ncols << ' ' << a.nnz() << '\n';
  char buf[64];
  for (index_t i = 0; i < a.nrows; ++i) {
    for (index_t h = a.rowptr[i]; h < a.rowptr[i + 1]; ++h) {
      std::snprintf(buf, sizeof buf, "%.17g", a.values[h]);
      out << i + 1 << ' ' << a.colidx[h] + 1 << ' ' << buf << '\n';
    }
  }
}

inline void write_matrix_market(const std::string& path, const CsrView& a) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  write_matrix_market(out, a);
  if (!out) throw InputError("write failed for '" + path + "'");
}

namespace detail {

inline void put_u64_le(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
  out.write(reinterpret_cast<const char*>(b), 8);
}

inline bool get_u64_le(std::istream& in, std::uint64_t& v) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) return false;
  v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  return true;
}

}  // namespace detail

// Binary dense format: nrows, ncols as little-endian u64, then row-major
// IEEE-754 doubles, little-endian.
inline void write_dense(std::ostream& out, const DenseView& m) {
  detail::put_u64_le(out, static_cast<std::uint64_t>(m.rows));
  detail::put_u64_le(out, static_cast<std::uint64_t>(m.cols));
  for (index_t i = 0; i < m.rows; ++i)
    for (index_t j = 0; j < m.cols; ++j) detail::put_u64_le(out, std::bit_cast<std::uint64_t>(m(i, j)));
}

inline void write_dense(const std::string& path, const DenseView& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  write_dense(out, m);
  if (!out) throw InputError("write failed for '" + path + "'");
}

inline DenseMatrix read_dense(std::istream& in) {
  std::uint64_t rows = 0, cols = 0;
  if (!detail::get_u64_le(in, rows) || !detail::get_u64_le(in, cols))
    throw ParseError("truncated 16-byte dense header", 0);
  if (rows > (std::uint64_t{1} << 40) || cols > (std::uint64_t{1} << 40) ||
      (rows != 0 && cols > (std::uint64_t{1} << 40) / rows))
    throw ParseError("implausible dense dimensions", 0);
  DenseMatrix m(static_cast<index_t>(rows), static_cast<index_t>(cols), Layout::RowMajor);
  auto data = m.data();
  for (auto& x : data) {
    std::uint64_t bits = 0;
    if (!detail::get_u64_le(in, bits)) throw ParseError("dense payload shorter than header dimensions", 0);
    x = std::bit_cast<double>(bits);
  }
  if (in.peek() != std::char_traits<char>::eof()) throw ParseError("trailing bytes after dense payload", 0);
  return m;
}

inline DenseMatrix read_dense(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_dense(in);
}

}  // namespace sketchlab
