// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sketchlab/errors.hpp"

namespace sketchlab {

using index_t = std::int64_t;

enum class Layout { RowMajor, ColMajor };

inline const char* to_string(Layout l) { return l == Layout::RowMajor ? "row-major" : "column-major"; }

/// Read-only view of a dense matrix stored contiguously in `layout` order.
struct DenseView {
  index_t rows = 0;
  index_t cols = 0;
  Layout layout = Layout::RowMajor;
  std::span<const double> data;

  double operator()(index_t i, index_t j) const {
    return layout == Layout::RowMajor ? data[i * cols + j] : data[j * rows + i];
  }
  /// Pointer to row i; only meaningful for row-major storage.
  const double* row(index_t i) const { return data.data() + i * cols; }
};

/// Mutable counterpart of DenseView. Kernels with in-place semantics write through it.
struct DenseSpan {
  index_t rows = 0;
  index_t cols = 0;
  Layout layout = Layout::RowMajor;
  std::span<double> data;

  double& operator()(index_t i, index_t j) const {
    return layout == Layout::RowMajor ? data[i * cols + j] : data[j * rows + i];
  }
  double* row(index_t i) const { return data.data() + i * cols; }
  operator DenseView() const { return {rows, cols, layout, data}; }
};

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(index_t rows, index_t cols, Layout layout = Layout::RowMajor)
      : rows_(rows), cols_(cols), layout_(layout) {
    detail::require(rows >= 0 && cols >= 0, "DenseMatrix: negative dimension");
    data_.assign(static_cast<std::size_t>(rows * cols), 0.0);
  }
  DenseMatrix(index_t rows, index_t cols, Layout layout, std::vector<double> data)
      : rows_(rows), cols_(cols), layout_(layout), data_(std::move(data)) {
    detail::require(rows >= 0 && cols >= 0, "DenseMatrix: negative dimension");
    detail::require(static_cast<index_t>(data_.size()) == rows * cols,
                    "DenseMatrix: data length does not match dimensions");
  }

  static DenseMatrix identity(index_t n, Layout layout = Layout::RowMajor) {
    DenseMatrix m(n, n, layout);
    for (index_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  index_t rows() const noexcept { return rows_; }
  index_t cols() const noexcept { return cols_; }
  Layout layout() const noexcept { return layout_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  std::vector<double>& storage() noexcept { return data_; }

  double operator()(index_t i, index_t j) const {
    return layout_ == Layout::RowMajor ? data_[i * cols_ + j] : data_[j * rows_ + i];
  }
  double& operator()(index_t i, index_t j) {
    return layout_ == Layout::RowMajor ? data_[i * cols_ + j] : data_[j * rows_ + i];
  }

  DenseView view() const { return {rows_, cols_, layout_, data_}; }
  DenseSpan span() { return {rows_, cols_, layout_, data_}; }
  operator DenseView() const { return view(); }

  /// Copy in the requested storage order. Values are moved, never recomputed.
  DenseMatrix to_layout(Layout target) const {
    if (target == layout_) return *this;
    DenseMatrix out(rows_, cols_, target);
    for (index_t i = 0; i < rows_; ++i)
      for (index_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
    return out;
  }

  DenseMatrix transposed() const {
    DenseMatrix out(cols_, rows_, layout_);
    for (index_t i = 0; i < rows_; ++i)
      for (index_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  /// Logical equality, independent of layout.
  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    if (a.layout_ == b.layout_) return a.data_ == b.data_;
    for (index_t i = 0; i < a.rows_; ++i)
      for (index_t j = 0; j < a.cols_; ++j)
        if (a(i, j) != b(i, j)) return false;
    return true;
  }

 private:
  index_t rows_ = 0;
  index_t cols_ = 0;
  Layout layout_ = Layout::RowMajor;
  std::vector<double> data_;
};

inline DenseMatrix to_matrix(DenseView v) {
  return DenseMatrix(v.rows, v.cols, v.layout, std::vector<double>(v.data.begin(), v.data.end()));
}

/// Non-owning CSR view. rowptr has nrows+1 entries; colidx/values have nnz entries.
struct CsrView {
  index_t nrows = 0;
  index_t ncols = 0;
  std::span<const index_t> rowptr;
  std::span<const index_t> colidx;
  std::span<const double> values;

  index_t nnz() const { return nrows == 0 ? 0 : rowptr[nrows]; }
  index_t row_nnz(index_t i) const { return rowptr[i + 1] - rowptr[i]; }
};

/// Structural check: throws InputError naming the first violated invariant.
inline void validate(const CsrView& a) {
  detail::require(a.nrows >= 0 && a.ncols >= 0, "csr: negative dimension");
  detail::require(static_cast<index_t>(a.rowptr.size()) == a.nrows + 1, "csr: rowptr length != nrows+1");
  detail::require(a.rowptr[0] == 0, "csr: rowptr[0] != 0");
  detail::require(a.colidx.size() == a.values.size(), "csr: colidx and values differ in length");
  detail::require(a.rowptr[a.nrows] == static_cast<index_t>(a.colidx.size()),
                  "csr: rowptr[nrows] != nnz");
  for (index_t i = 0; i < a.nrows; ++i) {
    detail::require(a.rowptr[i] <= a.rowptr[i + 1], "csr: rowptr decreasing at row " + std::to_string(i));
    detail::require(a.rowptr[i + 1] <= a.rowptr[a.nrows], "csr: rowptr exceeds nnz at row " + std::to_string(i));
    for (index_t h = a.rowptr[i]; h < a.rowptr[i + 1]; ++h) {
      const index_t j = a.colidx[h];
      detail::require(j >= 0 && j < a.ncols, "csr: column index out of range in row " + std::to_string(i));
      detail::require(h == a.rowptr[i] || a.colidx[h - 1] < j,
                      "csr: column indices not strictly increasing in row " + std::to_string(i));
      detail::require(a.values[h] != 0.0, "csr: explicit zero stored in row " + std::to_string(i));
    }
  }
}

inline bool is_valid(const CsrView& a) {
  try {
    validate(a);
    return true;
  } catch (const InputError&) {
    return false;
  }
}

class CsrMatrix {
 public:
  CsrMatrix() : rowptr_(1, 0) {}
  CsrMatrix(index_t nrows, index_t ncols) : nrows_(nrows), ncols_(ncols), rowptr_(nrows + 1, 0) {
    detail::require(nrows >= 0 && ncols >= 0, "CsrMatrix: negative dimension");
  }
  /// Adopts canonical arrays; throws InputError if any structural invariant fails.
  CsrMatrix(index_t nrows, index_t ncols, std::vector<index_t> rowptr, std::vector<index_t> colidx,
            std::vector<double> values)
      : nrows_(nrows),
        ncols_(ncols),
        rowptr_(std::move(rowptr)),
        colidx_(std::move(colidx)),
        values_(std::move(values)) {
    validate(view());
  }

  index_t rows() const noexcept { return nrows_; }
  index_t cols() const noexcept { return ncols_; }
  index_t nnz() const noexcept { return static_cast<index_t>(values_.size()); }
  const std::vector<index_t>& rowptr() const noexcept { return rowptr_; }
  const std::vector<index_t>& colidx() const noexcept { return colidx_; }
  const std::vector<double>& values() const noexcept { return values_; }

  CsrView view() const { return {nrows_, ncols_, rowptr_, colidx_, values_}; }
  operator CsrView() const { return view(); }

 private:
  index_t nrows_ = 0;
  index_t ncols_ = 0;
  std::vector<index_t> rowptr_;
  std::vector<index_t> colidx_;
  std::vector<double> values_;
};

struct Triplet {
  index_t row;
  index_t col;
  double value;
};

/// Canonical CSR from coordinates: columns sorted per row, duplicates summed, zeros dropped.
inline CsrMatrix csr_from_triplets(index_t nrows, index_t ncols, std::vector<Triplet> triplets) {
  detail::require(nrows >= 0 && ncols >= 0, "csr_from_triplets: negative dimension");
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
      throw InputError("csr_from_triplets: index (" + std::to_string(t.row) + "," +
                       std::to_string(t.col) + ") out of range");
  }
  // stable so duplicates are summed in input order
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  std::vector<index_t> rowptr(nrows + 1, 0);
  std::vector<index_t> colidx;
  std::vector<double> values;
  colidx.reserve(triplets.size());
  values.reserve(triplets.size());
  std::size_t h = 0;
  for (index_t i = 0; i < nrows; ++i) {
    while (h < triplets.size() && triplets[h].row == i) {
      const index_t j = triplets[h].col;
      double sum = 0.0;
      for (; h < triplets.size() && triplets[h].row == i && triplets[h].col == j; ++h) sum += triplets[h].value;
      if (sum != 0.0) {
        colidx.push_back(j);
        values.push_back(sum);
      }
    }
    rowptr[i + 1] = static_cast<index_t>(colidx.size());
  }
  return CsrMatrix(nrows, ncols, std::move(rowptr), std::move(colidx), std::move(values));
}

/// Sum over rows of the squared per-row nonzero count.
inline index_t nnz2(const CsrView& a) {
  index_t s = 0;
  for (index_t i = 0; i < a.nrows; ++i) {
    const index_t w = a.row_nnz(i);
    s += w * w;
  }
  return s;
}

inline DenseMatrix to_dense(const CsrView& a, Layout layout = Layout::RowMajor) {
  DenseMatrix out(a.nrows, a.ncols, layout);
  for (index_t i = 0; i < a.nrows; ++i)
    for (index_t h = a.rowptr[i]; h < a.rowptr[i + 1]; ++h) out(i, a.colidx[h]) = a.values[h];
  return out;
}

inline CsrMatrix to_csr(const DenseView& a) {
  std::vector<index_t> rowptr(a.rows + 1, 0);
  std::vector<index_t> colidx;
  std::vector<double> values;
  for (index_t i = 0; i < a.rows; ++i) {
    for (index_t j = 0; j < a.cols; ++j) {
      const double v = a(i, j);
      if (v != 0.0) {
        colidx.push_back(j);
        values.push_back(v);
      }
    }
    rowptr[i + 1] = static_cast<index_t>(colidx.size());
  }
  return CsrMatrix(a.rows, a.cols, std::move(rowptr), std::move(colidx), std::move(values));
}

/// A[:, cols] keeping the given column order.
inline CsrMatrix select_columns(const CsrView& a, std::span<const index_t> cols) {
  std::vector<index_t> position(a.ncols, -1);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    detail::require(cols[c] >= 0 && cols[c] < a.ncols, "select_columns: index out of range");
    position[cols[c]] = static_cast<index_t>(c);
  }
  std::vector<index_t> rowptr(a.nrows + 1, 0);
  std::vector<index_t> colidx;
  std::vector<double> values;
  std::vector<std::pair<index_t, double>> row;
  for (index_t i = 0; i < a.nrows; ++i) {
    row.clear();
    for (index_t h = a.rowptr[i]; h < a.rowptr[i + 1]; ++h)
      if (position[a.colidx[h]] >= 0) row.emplace_back(position[a.colidx[h]], a.values[h]);
    std::sort(row.begin(), row.end());
    for (const auto& [j, v] : row) {
      colidx.push_back(j);
      values.push_back(v);
    }
    rowptr[i + 1] = static_cast<index_t>(colidx.size());
  }
  return CsrMatrix(a.nrows, static_cast<index_t>(cols.size()), std::move(rowptr), std::move(colidx),
                   std::move(values));
}

inline DenseMatrix select_columns(const DenseView& a, std::span<const index_t> cols) {
  DenseMatrix out(a.rows, static_cast<index_t>(cols.size()), Layout::RowMajor);
  for (std::size_t c = 0; c < cols.size(); ++c)
    detail::require(cols[c] >= 0 && cols[c] < a.cols, "select_columns: index out of range");
  for (index_t i = 0; i < a.rows; ++i)
    for (std::size_t c = 0; c < cols.size(); ++c) out(i, static_cast<index_t>(c)) = a(i, cols[c]);
  return out;
}

/// [A b]: appends b as a trailing column.
inline CsrMatrix append_column(const CsrView& a, std::span<const double> b) {
  detail::require(static_cast<index_t>(b.size()) == a.nrows, "append_column: length mismatch");
  std::vector<index_t> rowptr(a.nrows + 1, 0);
  std::vector<index_t> colidx;
  std::vector<double> values;
  colidx.reserve(a.nnz() + a.nrows);
  values.reserve(a.nnz() + a.nrows);
  for (index_t i = 0; i < a.nrows; ++i) {
    for (index_t h = a.rowptr[i]; h < a.rowptr[i + 1]; ++h) {
      colidx.push_back(a.colidx[h]);
      values.push_back(a.values[h]);
    }
    if (b[i] != 0.0) {
      colidx.push_back(a.ncols);
      values.push_back(b[i]);
    }
    rowptr[i + 1] = static_cast<index_t>(colidx.size());
  }
  return CsrMatrix(a.nrows, a.ncols + 1, std::move(rowptr), std::move(colidx), std::move(values));
}

inline DenseMatrix append_column(const DenseView& a, std::span<const double> b) {
  detail::require(static_cast<index_t>(b.size()) == a.rows, "append_column: length mismatch");
  DenseMatrix out(a.rows, a.cols + 1, Layout::RowMajor);
  for (index_t i = 0; i < a.rows; ++i) {
    for (index_t j = 0; j < a.cols; ++j) out(i, j) = a(i, j);
    out(i, a.cols) = b[i];
  }
  return out;
}

/// Row-major copy, or the view itself when it already is row-major.
class RowMajorHold {
 public:
  explicit RowMajorHold(DenseView v) {
    if (v.layout == Layout::RowMajor) {
      view_ = v;
    } else {
      owned_ = to_matrix(v).to_layout(Layout::RowMajor);
      view_ = owned_.view();
    }
  }
  RowMajorHold(const RowMajorHold&) = delete;
  RowMajorHold& operator=(const RowMajorHold&) = delete;

  const DenseView& view() const { return view_; }

 private:
  DenseMatrix owned_;
  DenseView view_;
};

}  // namespace sketchlab
