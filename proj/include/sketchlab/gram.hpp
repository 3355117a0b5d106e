// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <new>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sketchlab/matrix.hpp"
#include "sketchlab/parallel.hpp"

namespace sketchlab {

enum class GramAlgo { Serial, LowMem, RowPart };

inline const char* to_string(GramAlgo a) {
  switch (a) {
    case GramAlgo::Serial: return "serial";
    case GramAlgo::LowMem: return "lowmem";
    case GramAlgo::RowPart: return "rowpart";
  }
  return "?";
}

inline std::optional<GramAlgo> parse_gram_algo(std::string_view s) {
  if (s == "serial") return GramAlgo::Serial;
  if (s == "lowmem") return GramAlgo::LowMem;
  if (s == "rowpart") return GramAlgo::RowPart;
  return std::nullopt;
}

namespace detail {

inline void check_gram_output(index_t d, const DenseSpan& b, const char* who) {
  require(b.rows == d && b.cols == d, std::string(who) + ": B must be " + std::to_string(d) + "x" +
                                          std::to_string(d) + ", got " + std::to_string(b.rows) + "x" +
                                          std::to_string(b.cols));
  require(b.layout == Layout::RowMajor, std::string(who) + ": B must be row-major");
}

inline void scale_rows(const DenseSpan& b, double beta, index_t r0, index_t r1) {
  for (index_t i = r0; i < r1; ++i) {
    double* row = b.row(i);
    if (beta == 0.0) {
      std::fill(row, row + b.cols, 0.0);
    } else {
      for (index_t j = 0; j < b.cols; ++j) row[j] *= beta;
    }
  }
}

// out += alpha * A[rows]^T A[rows]; returns accumulation flops.
inline index_t gram_accumulate(const CsrView& a, double alpha, index_t row_begin, index_t row_end, double* out,
                               index_t ld) {
  index_t pairs = 0;
  for (index_t i = row_begin; i < row_end; ++i) {
    const index_t h0 = a.rowptr[i];
    const index_t h1 = a.rowptr[i + 1];
    for (index_t k = h0; k < h1; ++k) {
      const double gamma = alpha * a.values[k];
      double* brow = out + a.colidx[k] * ld;
      for (index_t h = h0; h < h1; ++h) brow[a.colidx[h]] += gamma * a.values[h];
    }
    pairs += (h1 - h0) * (h1 - h0);
  }
  return 2 * pairs;
}

inline void record_gram_stats(KernelStats* stats, const CsrView& a, double alpha, double beta, index_t accumulate) {
  if (!stats) return;
  const index_t d = a.ncols;
  stats->accumulate_flops += accumulate;
  stats->flops += (beta != 1.0 ? d * d : 0) + (alpha != 0.0 ? a.nnz() + accumulate : 0);
}

}  // namespace detail

/// B <- alpha*A^T*A + beta*B by row outer products.
inline void gram_serial(const CsrView& a, double alpha, double beta, const DenseSpan& b, KernelStats* stats = nullptr) {
  detail::check_gram_output(a.ncols, b, "gram_serial");
  if (beta != 1.0) detail::scale_rows(b, beta, 0, b.rows);
  index_t acc = 0;
  if (alpha != 0.0) acc = detail::gram_accumulate(a, alpha, 0, a.nrows, b.data.data(), b.cols);
  detail::record_gram_stats(stats, a, alpha, beta, acc);
}

/// Same result as gram_serial with no auxiliary storage. Worker t owns output
/// rows stripe(d, p, t) and, for every input row, binary-searches the sorted
/// column segment for the indices it owns. Each output entry accumulates over
/// input rows in increasing order, so the result is bitwise independent of p.
inline void gram_parallel_lowmem(const CsrView& a, double alpha, double beta, const DenseSpan& b, int threads = 0,
                                 KernelStats* stats = nullptr) {
  detail::check_gram_output(a.ncols, b, "gram_parallel_lowmem");
  const int p = resolve_threads(threads);
  const index_t d = a.ncols;
  std::vector<index_t> acc(static_cast<std::size_t>(p), 0);
#pragma omp parallel for num_threads(p) schedule(static, 1)
  for (int t = 0; t < p; ++t) {
    const auto [c0, c1] = stripe(d, p, t);
    if (beta != 1.0) detail::scale_rows(b, beta, c0, c1);
    if (alpha == 0.0 || c0 >= c1) continue;
    index_t pairs = 0;
    for (index_t i = 0; i < a.nrows; ++i) {
      const index_t h0 = a.rowptr[i];
      const index_t h1 = a.rowptr[i + 1];
      const index_t* cols = a.colidx.data();
      const index_t ka = std::lower_bound(cols + h0, cols + h1, c0) - cols;
      const index_t kb = std::lower_bound(cols + ka, cols + h1, c1) - cols;
      for (index_t k = ka; k < kb; ++k) {
        const double gamma = alpha * a.values[k];
        double* brow = b.row(cols[k]);
        for (index_t h = h0; h < h1; ++h) brow[cols[h]] += gamma * a.values[h];
      }
      pairs += (kb - ka) * (h1 - h0);
    }
    acc[static_cast<std::size_t>(t)] = 2 * pairs;
  }
  index_t total = 0;
  for (auto x : acc) total += x;
  detail::record_gram_stats(stats, a, alpha, beta, total);
}

/// Row-partitioned Gram: each worker forms the Gram of its row block in a
/// private d x d buffer, then after one barrier the buffers are summed over
/// output-row stripes of width ceil(d/p). Needs p*d*d extra doubles; with a
/// single worker the buffer is skipped and the product accumulates in place.
inline void gram_parallel_rowpart(const CsrView& a, double alpha, double beta, const DenseSpan& b, int threads = 0,
                                  KernelStats* stats = nullptr) {
  detail::check_gram_output(a.ncols, b, "gram_parallel_rowpart");
  const int p = resolve_threads(threads);
  if (p == 1) {
    gram_serial(a, alpha, beta, b, stats);
    return;
  }
  const index_t d = a.ncols;
  if (alpha == 0.0) {
    if (beta != 1.0) {
#pragma omp parallel for num_threads(p) schedule(static, 1)
      for (int t = 0; t < p; ++t) {
        const auto [c0, c1] = stripe(d, p, t);
        detail::scale_rows(b, beta, c0, c1);
      }
    }
    detail::record_gram_stats(stats, a, alpha, beta, 0);
    return;
  }
  std::vector<std::vector<double>> partial;
  try {
    partial.resize(static_cast<std::size_t>(p));
    for (auto& buf : partial) buf.assign(static_cast<std::size_t>(d * d), 0.0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("gram_parallel_rowpart: cannot allocate " + std::to_string(p) + " partial " +
                        std::to_string(d) + "x" + std::to_string(d) + " buffers");
  }
  std::vector<index_t> acc(static_cast<std::size_t>(p), 0);
#pragma omp parallel num_threads(p)
  {
    // a team smaller than p makes threads take several logical workers
    const int nt = team_size();
    for (int t = worker_id(); t < p; t += nt) {
      const auto [r0, r1] = stripe(a.nrows, p, t);
      acc[static_cast<std::size_t>(t)] =
          detail::gram_accumulate(a, alpha, r0, r1, partial[static_cast<std::size_t>(t)].data(), d);
    }
#pragma omp barrier
    for (int t = worker_id(); t < p; t += nt) {
      const auto [c0, c1] = stripe(d, p, t);
      if (beta != 1.0) detail::scale_rows(b, beta, c0, c1);
      for (int k = 0; k < p; ++k) {
        const double* src = partial[static_cast<std::size_t>(k)].data();
        for (index_t i = c0; i < c1; ++i) {
          double* dst = b.row(i);
          const double* s = src + i * d;
          for (index_t j = 0; j < d; ++j) dst[j] += s[j];
        }
      }
    }
  }
  index_t total = 0;
  for (auto x : acc) total += x;
  detail::record_gram_stats(stats, a, alpha, beta, total);
  if (stats) {
    stats->flops += static_cast<index_t>(p) * d * d;
    stats->aux_bytes += static_cast<index_t>(p) * d * d * static_cast<index_t>(sizeof(double));
  }
}

inline void gram(const CsrView& a, double alpha, double beta, const DenseSpan& b, GramAlgo algo, int threads = 0,
                 KernelStats* stats = nullptr) {
  switch (algo) {
    case GramAlgo::Serial: gram_serial(a, alpha, beta, b, stats); return;
    case GramAlgo::LowMem: gram_parallel_lowmem(a, alpha, beta, b, threads, stats); return;
    case GramAlgo::RowPart: gram_parallel_rowpart(a, alpha, beta, b, threads, stats); return;
  }
}

/// Dense-input Gram, B <- alpha*A^T*A + beta*B, parallel over output-row stripes.
inline void gram_dense(const DenseView& a, double alpha, double beta, const DenseSpan& b, int threads = 0,
                       KernelStats* stats = nullptr) {
  detail::check_gram_output(a.cols, b, "gram_dense");
  RowMajorHold rm(a);
  const DenseView av = rm.view();
  const int p = resolve_threads(threads);
  const index_t d = av.cols;
#pragma omp parallel for num_threads(p) schedule(static, 1)
  for (int t = 0; t < p; ++t) {
    const auto [c0, c1] = stripe(d, p, t);
    if (beta != 1.0) detail::scale_rows(b, beta, c0, c1);
    if (alpha == 0.0) continue;
    for (index_t k = 0; k < av.rows; ++k) {
      const double* ak = av.row(k);
      for (index_t i = c0; i < c1; ++i) {
        const double gamma = alpha * ak[i];
        if (gamma == 0.0) continue;
        double* brow = b.row(i);
        for (index_t j = 0; j < d; ++j) brow[j] += gamma * ak[j];
      }
    }
  }
  if (stats) {
    stats->flops += (beta != 1.0 ? d * d : 0) + (alpha != 0.0 ? 2 * av.rows * d * d + av.rows * d : 0);
    stats->accumulate_flops += alpha != 0.0 ? 2 * av.rows * d * d : 0;
  }
}

/// A^T*A as a fresh row-major matrix.
inline DenseMatrix gram_matrix(const CsrView& a, GramAlgo algo = GramAlgo::RowPart, int threads = 0) {
  DenseMatrix b(a.ncols, a.ncols, Layout::RowMajor);
  gram(a, 1.0, 0.0, b.span(), algo, threads);
  return b;
}

inline DenseMatrix gram_matrix(const DenseView& a, GramAlgo = GramAlgo::RowPart, int threads = 0) {
  DenseMatrix b(a.cols, a.cols, Layout::RowMajor);
  gram_dense(a, 1.0, 0.0, b.span(), threads);
  return b;
}

}  // namespace sketchlab
