// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <span>
#include <string>
#include <vector>

#include "sketchlab/matrix.hpp"
#include "sketchlab/parallel.hpp"

namespace sketchlab {

namespace detail {

inline constexpr index_t kRowClaim = 32;

inline void check_sqn(index_t n, index_t d, const DenseView& b, std::span<double> x, const char* who) {
  require(b.rows == d, std::string(who) + ": B has " + std::to_string(b.rows) + " rows, A has " +
                           std::to_string(d) + " columns");
  require(static_cast<index_t>(x.size()) == n,
          std::string(who) + ": x has length " + std::to_string(x.size()) + ", expected " + std::to_string(n));
}

inline void scale_vector(std::span<double> x, double beta, int p) {
  if (beta == 1.0) return;
  const auto n = static_cast<index_t>(x.size());
#pragma omp parallel for num_threads(p) schedule(static)
  for (index_t i = 0; i < n; ++i) x[i] = beta == 0.0 ? 0.0 : beta * x[i];
}

// Workers repeatedly claim the next unfinished chunk of rows until none remain.
template <typename RowFn>
void for_rows_dynamic(index_t n, int p, RowFn&& fn) {
  std::atomic<index_t> next{0};
#pragma omp parallel num_threads(p)
  {
    for (;;) {
      const index_t i0 = next.fetch_add(kRowClaim, std::memory_order_relaxed);
      if (i0 >= n) break;
      const index_t i1 = std::min(n, i0 + kRowClaim);
      for (index_t i = i0; i < i1; ++i) fn(i);
    }
  }
}

}  // namespace detail

/// x <- alpha*q + beta*x, q_i = ||(A*B)_{i,:}||^2 for CSR A (n x d) and B (d x r).
/// Forms Bt = B*B^T once; row i then costs O(nnz(A_i)^2).
inline void sqn_csr(const CsrView& a, const DenseView& b, double alpha, double beta, std::span<double> x,
                    int threads = 0, KernelStats* stats = nullptr) {
  detail::check_sqn(a.nrows, a.ncols, b, x, "sqn_csr");
  const int p = resolve_threads(threads);
  detail::scale_vector(x, beta, p);
  if (alpha == 0.0) {
    if (stats) stats->flops += beta != 1.0 ? a.nrows : 0;
    return;
  }
  RowMajorHold rm(b);
  const DenseView bv = rm.view();
  const index_t d = a.ncols;
  const index_t r = bv.cols;
  std::vector<double> bt(static_cast<std::size_t>(d * d), 0.0);
#pragma omp parallel for num_threads(p) schedule(static)
  for (index_t i = 0; i < d; ++i) {
    const double* bi = bv.row(i);
    for (index_t j = 0; j < d; ++j) {
      const double* bj = bv.row(j);
      double s = 0.0;
      for (index_t c = 0; c < r; ++c) s += bi[c] * bj[c];
      bt[i * d + j] = s;
    }
  }
  detail::for_rows_dynamic(a.nrows, p, [&](index_t i) {
    const index_t h0 = a.rowptr[i];
    const index_t h1 = a.rowptr[i + 1];
    double acc = 0.0;
    for (index_t k = h0; k < h1; ++k) {
      const double gamma = alpha * a.values[k];
      const double* btk = bt.data() + a.colidx[k];
      for (index_t j = h0; j < h1; ++j) acc += gamma * a.values[j] * btk[a.colidx[j] * d];
    }
    x[i] += acc;
  });
  if (stats) {
    const index_t q = nnz2(a);
    stats->accumulate_flops += 3 * q;
    stats->flops += 3 * q + a.nnz() + a.nrows + (beta != 1.0 ? a.nrows : 0) + (2 * r - 1) * d * d;
    stats->aux_bytes += d * d * static_cast<index_t>(sizeof(double));
  }
}

/// Dense-input counterpart: row i computes y = A_i*B directly (no B*B^T) and
/// adds alpha*||y||^2. `flops` counts the row products, n*(2dr - r).
inline void sqn_dense(const DenseView& a, const DenseView& b, double alpha, double beta, std::span<double> x,
                      int threads = 0, KernelStats* stats = nullptr) {
  detail::check_sqn(a.rows, a.cols, b, x, "sqn_dense");
  const int p = resolve_threads(threads);
  detail::scale_vector(x, beta, p);
  if (alpha == 0.0 || a.cols == 0) return;
  RowMajorHold ra(a);
  RowMajorHold rb(b);
  const DenseView av = ra.view();
  const DenseView bv = rb.view();
  const index_t d = av.cols;
  const index_t r = bv.cols;
  std::vector<index_t> row_flops(static_cast<std::size_t>(p) * 8, 0);  // padded per worker
  detail::for_rows_dynamic(av.rows, p, [&](index_t i) {
    thread_local std::vector<double> y;
    y.resize(static_cast<std::size_t>(r));
    const double* ai = av.row(i);
    const double* b0 = bv.row(0);
    for (index_t c = 0; c < r; ++c) y[c] = ai[0] * b0[c];
    for (index_t j = 1; j < d; ++j) {
      const double aij = ai[j];
      const double* bj = bv.row(j);
      for (index_t c = 0; c < r; ++c) y[c] += aij * bj[c];
    }
    double s = 0.0;
    for (index_t c = 0; c < r; ++c) s += y[c] * y[c];
    x[i] += alpha * s;
    row_flops[static_cast<std::size_t>(worker_id()) * 8] += r + 2 * r * (d - 1);
  });
  if (stats) {
    for (std::size_t t = 0; t < row_flops.size(); t += 8) stats->flops += row_flops[t];
    stats->aux_bytes += static_cast<index_t>(p) * r * static_cast<index_t>(sizeof(double));
  }
}

inline std::vector<double> squared_row_norms(const CsrView& a, const DenseView& b, int threads = 0) {
  std::vector<double> x(static_cast<std::size_t>(a.nrows), 0.0);
  sqn_csr(a, b, 1.0, 0.0, x, threads);
  return x;
}

inline std::vector<double> squared_row_norms(const DenseView& a, const DenseView& b, int threads = 0) {
  std::vector<double> x(static_cast<std::size_t>(a.rows), 0.0);
  sqn_dense(a, b, 1.0, 0.0, x, threads);
  return x;
}

}  // namespace sketchlab
