// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sketchlab/matrix.hpp"
#include "sketchlab/parallel.hpp"
#include "sketchlab/random.hpp"

namespace sketchlab {

/// Sketch dimensions and parameters shared by the sketching kernels and the
/// application layer.
struct SketchConfig {
  index_t m = 0;        // Gaussian rows (0 skips G where allowed)
  index_t r = 1;        // CountSketch rows
  index_t k = 0;        // target subspace dimension (0: numerical rank from rcond)
  double rcond = 1e-12; // singular-value truncation threshold
  index_t batch = 0;    // GSA batch size (0: d, clamped to r)
  std::uint64_t seed = 0;
  bool scale_gaussian = true;  // multiply G by 1/sqrt(m)

  void validate() const {
    detail::require(m >= 0, "SketchConfig: m must be >= 0");
    detail::require(r >= 1, "SketchConfig: r must be >= 1");
    detail::require(k >= 0, "SketchConfig: k must be >= 0");
    detail::require(rcond >= 0.0 && rcond < 1.0, "SketchConfig: rcond must lie in [0, 1)");
    detail::require(batch >= 0 && batch <= r, "SketchConfig: batch must lie in [1, r]");
  }
};

enum class SketchVariant { Coo, Bccs };

inline const char* to_string(SketchVariant v) { return v == SketchVariant::Coo ? "coo" : "bccs"; }

/// One signed 1-based row per column: S(|v[k]| - 1, k) = sign(v[k]).
struct CountSketchVector {
  index_t r = 0;
  std::vector<index_t> v;

  index_t n() const { return static_cast<index_t>(v.size()); }
};

struct StorageFootprint {
  index_t indices = 0;
  index_t block_handles = 0;
};

/// r x n CountSketch stored as a b_r x b_c grid of sparse blocks.
///
/// COO blocks hold (local row, signed local column) pairs. With one-row blocks
/// (BCCS) only the signed local column is kept. Signed local columns are
/// stored as +-(col + 1). Within a block, entries are kept in increasing
/// column order, which fixes the accumulation order of every product.
class BlockCountSketch {
 public:
  BlockCountSketch(index_t r, index_t n, index_t n_r, index_t n_c, SketchVariant variant)
      : r_(r), n_(n), n_r_(n_r), n_c_(n_c), variant_(variant) {
    detail::require(r >= 1 && n >= 1, "BlockCountSketch: r and n must be >= 1");
    detail::require(n_r >= 1 && n_r <= r, "BlockCountSketch: n_r must lie in [1, r]");
    detail::require(n_c >= 1 && n_c <= n, "BlockCountSketch: n_c must lie in [1, n]");
    detail::require(variant != SketchVariant::Bccs || n_r == 1, "BlockCountSketch: BCCS requires n_r = 1");
    detail::require(n_r < (index_t{1} << 31) && n_c < (index_t{1} << 31),
                    "BlockCountSketch: block dimensions must fit 32-bit local indices");
    b_r_ = (r + n_r - 1) / n_r;
    b_c_ = (n + n_c - 1) / n_c;
    signed_cols_.resize(static_cast<std::size_t>(b_r_ * b_c_));
    if (variant == SketchVariant::Coo) local_rows_.resize(signed_cols_.size());
  }

  index_t rows() const noexcept { return r_; }
  index_t cols() const noexcept { return n_; }
  index_t rows_per_block() const noexcept { return n_r_; }
  index_t cols_per_block() const noexcept { return n_c_; }
  index_t row_blocks() const noexcept { return b_r_; }
  index_t col_blocks() const noexcept { return b_c_; }
  SketchVariant variant() const noexcept { return variant_; }

  /// Appends S(row, col) = sign. O(1).
  void insert(index_t row, index_t col, int sign) {
    const index_t bi = row / n_r_;
    const index_t bj = col / n_c_;
    const std::size_t b = block_index(bi, bj);
    const index_t local_col = col - bj * n_c_ + 1;
    signed_cols_[b].push_back(static_cast<std::int32_t>(sign > 0 ? local_col : -local_col));
    if (variant_ == SketchVariant::Coo) local_rows_[b].push_back(static_cast<std::int32_t>(row - bi * n_r_));
  }

  /// Calls f(global_row, global_col, sign) for each stored entry of block (bi, bj).
  template <typename F>
  void for_each_in_block(index_t bi, index_t bj, F&& f) const {
    const std::size_t b = block_index(bi, bj);
    const auto& cols = signed_cols_[b];
    const index_t row0 = bi * n_r_;
    const index_t col0 = bj * n_c_;
    for (std::size_t e = 0; e < cols.size(); ++e) {
      const index_t sc = cols[e];
      const index_t lr = variant_ == SketchVariant::Coo ? local_rows_[b][e] : 0;
      f(row0 + lr, col0 + (sc > 0 ? sc : -sc) - 1, sc > 0 ? 1 : -1);
    }
  }

  template <typename F>
  void for_each(F&& f) const {
    for (index_t bi = 0; bi < b_r_; ++bi)
      for (index_t bj = 0; bj < b_c_; ++bj) for_each_in_block(bi, bj, f);
  }

  index_t stored_entries() const {
    index_t s = 0;
    for (const auto& b : signed_cols_) s += static_cast<index_t>(b.size());
    return s;
  }

  /// Index words and block handles held by the structure (signs ride in the index sign bit).
  StorageFootprint footprint() const {
    const index_t per_entry = variant_ == SketchVariant::Coo ? 2 : 1;
    return {per_entry * stored_entries(), b_r_ * b_c_};
  }

  DenseMatrix densify() const {
    DenseMatrix s(r_, n_, Layout::RowMajor);
    for_each([&](index_t i, index_t k, int sign) { s(i, k) += sign; });
    return s;
  }

  BlockCountSketch negated() const {
    BlockCountSketch out = *this;
    for (auto& b : out.signed_cols_)
      for (auto& sc : b) sc = -sc;
    return out;
  }

 private:
  std::size_t block_index(index_t bi, index_t bj) const { return static_cast<std::size_t>(bi * b_c_ + bj); }

  index_t r_, n_, n_r_, n_c_;
  index_t b_r_ = 0, b_c_ = 0;
  SketchVariant variant_;
  std::vector<std::vector<std::int32_t>> signed_cols_;
  std::vector<std::vector<std::int32_t>> local_rows_;
};

/// Column k of the CountSketch keyed by (seed, k): row drawn first, then sign.
struct CountSketchColumn {
  index_t row;
  int sign;
};

inline CountSketchColumn draw_countsketch_column(std::uint64_t seed, index_t r, index_t k) {
  RandomStream s(seed, {StreamKind::CountSketch, 0, static_cast<std::uint64_t>(k)});
  const auto row = static_cast<index_t>(s.randi(static_cast<std::uint64_t>(r)));
  const int sign = s.randb() ? 1 : -1;
  return {row, sign};
}

struct BuildOptions {
  SketchVariant variant = SketchVariant::Coo;
  index_t n_r = 0;  // 0: ceil(r / threads) for COO, 1 for BCCS
  index_t n_c = 0;  // 0: ceil(n / threads)
  int threads = 0;
  KernelStats* stats = nullptr;
};

/// Populates an r x n Block CountSketch, parallel over column blocks.
inline BlockCountSketch build_countsketch(index_t r, index_t n, std::uint64_t seed, const BuildOptions& opt = {}) {
  detail::require(r >= 1 && n >= 1, "build_countsketch: r and n must be >= 1");
  const int p = resolve_threads(opt.threads);
  index_t n_r = opt.n_r;
  if (n_r == 0) n_r = opt.variant == SketchVariant::Bccs ? 1 : std::max<index_t>(1, (r + p - 1) / p);
  const index_t n_c = opt.n_c == 0 ? std::max<index_t>(1, (n + p - 1) / p) : opt.n_c;
  BlockCountSketch s(r, n, n_r, n_c, opt.variant);
  const index_t b_c = s.col_blocks();
  // Column blocks own disjoint block columns, so inserts never collide. Blocks
  // in different row blocks of the same column block are written by one worker.
#pragma omp parallel for num_threads(p) schedule(dynamic, 1)
  for (index_t bj = 0; bj < b_c; ++bj) {
    const index_t k1 = std::min(n, (bj + 1) * n_c);
    for (index_t k = bj * n_c; k < k1; ++k) {
      const auto col = draw_countsketch_column(seed, r, k);
      s.insert(col.row, k, col.sign);
    }
  }
  if (opt.stats) {
    opt.stats->randi += n;
    opt.stats->randb += n;
  }
  return s;
}

inline CountSketchVector to_vector(const BlockCountSketch& s) {
  CountSketchVector out{s.rows(), std::vector<index_t>(static_cast<std::size_t>(s.cols()), 0)};
  s.for_each([&](index_t i, index_t k, int sign) { out.v[k] = sign * (i + 1); });
  return out;
}

inline BlockCountSketch from_vector(const CountSketchVector& v, index_t n_r, index_t n_c, SketchVariant variant) {
  detail::require(v.n() >= 1 && v.r >= 1, "from_vector: empty sketch");
  for (index_t k = 0; k < v.n(); ++k) {
    const index_t e = v.v[k];
    if (e == 0 || e > v.r || -e > v.r)
      throw InputError("from_vector: entry " + std::to_string(k) + " has |v| outside [1, r]");
  }
  BlockCountSketch s(v.r, v.n(), n_r, n_c, variant);
  for (index_t k = 0; k < v.n(); ++k) {
    const index_t e = v.v[k];
    s.insert((e > 0 ? e : -e) - 1, k, e > 0 ? 1 : -1);
  }
  return s;
}

namespace detail {

// out_row += sign * A[k, :]; returns the number of contributions.
inline index_t accumulate_row(const CsrView& a, index_t k, int sign, double* out_row) {
  const index_t h0 = a.rowptr[k];
  const index_t h1 = a.rowptr[k + 1];
  const double s = sign;
  for (index_t h = h0; h < h1; ++h) out_row[a.colidx[h]] += s * a.values[h];
  return h1 - h0;
}

inline index_t accumulate_row(const DenseView& a, index_t k, int sign, double* out_row) {
  const double* src = a.row(k);
  const double s = sign;
  for (index_t j = 0; j < a.cols; ++j) out_row[j] += s * src[j];
  return a.cols;
}

inline index_t input_rows(const CsrView& a) { return a.nrows; }
inline index_t input_rows(const DenseView& a) { return a.rows; }
inline index_t input_cols(const CsrView& a) { return a.ncols; }
inline index_t input_cols(const DenseView& a) { return a.cols; }

// Rows [row_begin, row_end) of S*A accumulated into out (row-major, ld = d).
template <typename Input>
void sa_rows(const BlockCountSketch& s, const Input& a, index_t row_begin, index_t row_end, double* out, int p,
             KernelStats* stats) {
  const index_t d = input_cols(a);
  const index_t n_r = s.rows_per_block();
  const index_t bi0 = row_begin / n_r;
  const index_t bi1 = (row_end + n_r - 1) / n_r;
  const index_t nblocks = bi1 - bi0;
  std::vector<index_t> work(static_cast<std::size_t>(nblocks), 0);
#pragma omp parallel for num_threads(p) schedule(dynamic, 1)
  for (index_t t = 0; t < nblocks; ++t) {
    const index_t bi = bi0 + t;
    const bool clipped = bi * n_r < row_begin || (bi + 1) * n_r > row_end;
    index_t local = 0;
    for (index_t bj = 0; bj < s.col_blocks(); ++bj) {
      s.for_each_in_block(bi, bj, [&](index_t i, index_t k, int sign) {
        if (clipped && (i < row_begin || i >= row_end)) return;
        local += accumulate_row(a, k, sign, out + (i - row_begin) * d);
      });
    }
    work[static_cast<std::size_t>(t)] = local;
  }
  if (stats) {
    for (index_t t = 0; t < nblocks; ++t) stats->row_contributions += work[static_cast<std::size_t>(t)];
    if (stats->block_work.size() < static_cast<std::size_t>(s.row_blocks()))
      stats->block_work.resize(static_cast<std::size_t>(s.row_blocks()), 0);
    for (index_t t = 0; t < nblocks; ++t) stats->block_work[static_cast<std::size_t>(bi0 + t)] += work[static_cast<std::size_t>(t)];
  }
}

}  // namespace detail

/// C = S*A as a dense row-major r x d matrix, parallel over row blocks of S.
inline DenseMatrix multiply_sa(const BlockCountSketch& s, const CsrView& a, int threads = 0,
                               KernelStats* stats = nullptr) {
  detail::require(s.cols() == a.nrows, "multiply_sa: sketch has " + std::to_string(s.cols()) +
                                           " columns but A has " + std::to_string(a.nrows) + " rows");
  DenseMatrix c(s.rows(), a.ncols, Layout::RowMajor);
  detail::sa_rows(s, a, 0, s.rows(), c.data().data(), resolve_threads(threads), stats);
  if (stats) stats->flops += stats->row_contributions;
  return c;
}

inline DenseMatrix multiply_sa(const BlockCountSketch& s, const DenseView& a, int threads = 0,
                               KernelStats* stats = nullptr) {
  detail::require(s.cols() == a.rows, "multiply_sa: sketch has " + std::to_string(s.cols()) +
                                          " columns but A has " + std::to_string(a.rows) + " rows");
  RowMajorHold rm(a);
  DenseMatrix c(s.rows(), a.cols, Layout::RowMajor);
  detail::sa_rows(s, rm.view(), 0, s.rows(), c.data().data(), resolve_threads(threads), stats);
  if (stats) stats->flops += stats->row_contributions;
  return c;
}

struct GsaOptions {
  SketchVariant variant = SketchVariant::Coo;
  int threads = 0;
  KernelStats* stats = nullptr;
  /// Test hook: replaces the Gaussian draws, G(i, j) = gaussian_override(i, j). Not scaled.
  std::function<double(index_t, index_t)> gaussian_override;
};

/// The m x r Gaussian factor of G*S*A for a given seed, entry by entry.
inline GaussianField countgauss_field(std::uint64_t seed) { return GaussianField(seed, StreamKind::CountGauss); }

namespace detail {

template <typename Input>
DenseMatrix gsa_impl(const Input& a, const SketchConfig& cfg, const GsaOptions& opt) {
  cfg.validate();
  require(cfg.m >= 1, "multiply_gsa: m must be >= 1");
  const index_t n = input_rows(a);
  const index_t d = input_cols(a);
  require(n >= 1, "multiply_gsa: A has no rows");
  const int p = resolve_threads(opt.threads);
  const index_t m = cfg.m;
  const index_t r = cfg.r;
  const index_t b = std::min(r, cfg.batch > 0 ? cfg.batch : std::max<index_t>(1, d));

  BuildOptions bopt;
  bopt.variant = opt.variant;
  bopt.n_r = opt.variant == SketchVariant::Bccs ? 1 : std::max<index_t>(1, (b + p - 1) / p);
  bopt.threads = p;
  bopt.stats = opt.stats;
  const BlockCountSketch s = build_countsketch(r, n, cfg.seed, bopt);

  const GaussianField field = countgauss_field(cfg.seed);
  const double scale = cfg.scale_gaussian ? 1.0 / std::sqrt(static_cast<double>(m)) : 1.0;

  DenseMatrix c(m, d, Layout::RowMajor);  // zeroed
  std::vector<double> g;
  std::vector<double> sb;
  try {
    g.assign(static_cast<std::size_t>(m * b), 0.0);   // row-major m x b
    sb.assign(static_cast<std::size_t>(b * d), 0.0);  // row-major b x d
  } catch (const std::bad_alloc&) {
    throw ResourceError("multiply_gsa: cannot allocate batch buffers");
  }
  double* cd = c.data().data();
  index_t gemm_flops = 0;
  for (index_t j0 = 0; j0 < r; j0 += b) {
    const index_t bb = std::min(b, r - j0);
    std::fill(sb.begin(), sb.begin() + bb * d, 0.0);
    sa_rows(s, a, j0, j0 + bb, sb.data(), p, opt.stats);

    const index_t mm = m;
#pragma omp parallel for num_threads(p) schedule(static)
    for (index_t i = 0; i < mm; ++i) {
      double* gi = g.data() + i * b;
      if (opt.gaussian_override) {
        for (index_t jj = 0; jj < bb; ++jj) gi[jj] = opt.gaussian_override(i, j0 + jj);
      } else {
        for (index_t jj = 0; jj < bb; ++jj) gi[jj] = field(i, j0 + jj) * scale;
      }
      double* ci = cd + i * d;
      for (index_t jj = 0; jj < bb; ++jj) {
        const double gij = gi[jj];
        const double* brow = sb.data() + jj * d;
        for (index_t col = 0; col < d; ++col) ci[col] += gij * brow[col];
      }
    }
    gemm_flops += 2 * m * bb * d;
  }
  if (opt.stats) {
    opt.stats->randn += opt.gaussian_override ? 0 : m * r;
    opt.stats->accumulate_flops += gemm_flops;
    opt.stats->flops += opt.stats->row_contributions + gemm_flops;
    opt.stats->aux_bytes += static_cast<index_t>((m + d) * b * sizeof(double));
  }
  return c;
}

}  // namespace detail

/// C = G*S*A, G m x r Gaussian (scaled by 1/sqrt(m) when cfg.scale_gaussian),
/// S r x n CountSketch, computed in ceil(r / batch) batches.
inline DenseMatrix multiply_gsa(const CsrView& a, const SketchConfig& cfg, const GsaOptions& opt = {}) {
  return detail::gsa_impl(a, cfg, opt);
}

inline DenseMatrix multiply_gsa(const DenseView& a, const SketchConfig& cfg, const GsaOptions& opt = {}) {
  RowMajorHold rm(a);
  return detail::gsa_impl(rm.view(), cfg, opt);
}

/// G*S*A when cfg.m >= 1, otherwise the plain CountSketch product S*A.
template <typename Input>
DenseMatrix countgauss(const Input& a, const SketchConfig& cfg, int threads = 0, KernelStats* stats = nullptr) {
  if (cfg.m >= 1) {
    GsaOptions opt;
    opt.threads = threads;
    opt.stats = stats;
    return multiply_gsa(a, cfg, opt);
  }
  cfg.validate();
  BuildOptions bopt;
  bopt.threads = threads;
  bopt.stats = stats;
  const auto s = build_countsketch(cfg.r, detail::input_rows(a), cfg.seed, bopt);
  return multiply_sa(s, a, threads, stats);
}

}  // namespace sketchlab
