// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sketchlab/matrix.hpp"
#include "sketchlab/parallel.hpp"
#include "sketchlab/random.hpp"

namespace sketchlab {

struct GaussianOptions {
  bool scale = true;  // multiply G by 1/sqrt(m)
  int threads = 0;
  KernelStats* stats = nullptr;
};

/// The m x n Gaussian matrix used by sketch_gaussian_* for a given seed.
inline GaussianField gaussian_field(std::uint64_t seed) { return GaussianField(seed, StreamKind::Gaussian); }

/// C = G*A for CSR A, returned m x d column-major. G is never formed: each
/// worker owns a stripe of ceil(m/p) output rows and, per input row k, draws
/// its slice of column k of G and scatters it over the nonzeros of row k.
inline DenseMatrix sketch_gaussian_csr(const CsrView& a, index_t m, std::uint64_t seed,
                                       const GaussianOptions& opt = {}) {
  detail::require(m >= 1, "sketch_gaussian_csr: m must be >= 1");
  const int p = resolve_threads(opt.threads);
  const index_t d = a.ncols;
  const GaussianField field = gaussian_field(seed);
  const double scale = opt.scale ? 1.0 / std::sqrt(static_cast<double>(m)) : 1.0;
  DenseMatrix c(m, d, Layout::ColMajor);
  double* cd = c.data().data();

#pragma omp parallel for num_threads(p) schedule(static, 1)
  for (int t = 0; t < p; ++t) {
    const auto [i0, i1] = stripe(m, p, t);
    const index_t bt = i1 - i0;
    if (bt <= 0) continue;
    std::vector<double> g(static_cast<std::size_t>(bt));
    for (index_t k = 0; k < a.nrows; ++k) {
      const index_t h0 = a.rowptr[k];
      const index_t h1 = a.rowptr[k + 1];
      if (h0 == h1) continue;
      field.fill_column(k, i0, i1, scale, g.data());
      for (index_t h = h0; h < h1; ++h) {
        const double v = a.values[h];
        double* col = cd + a.colidx[h] * m + i0;
        for (index_t i = 0; i < bt; ++i) col[i] += g[i] * v;
      }
    }
  }
  if (opt.stats) {
    opt.stats->flops += 2 * a.nnz() * m;
    opt.stats->accumulate_flops += 2 * a.nnz() * m;
    index_t draws = 0;
    for (index_t k = 0; k < a.nrows; ++k) draws += a.row_nnz(k) > 0 ? m : 0;
    opt.stats->randn += draws;
    opt.stats->aux_bytes += m * static_cast<index_t>(sizeof(double));
  }
  return c;
}

/// Dense-input counterpart, blocked over input rows. Per output entry the
/// accumulation runs over k in increasing order and skips zero inputs, so the
/// result is bitwise equal to sketch_gaussian_csr on the CSR form of A.
inline DenseMatrix sketch_gaussian_dense(const DenseView& a, index_t m, std::uint64_t seed,
                                         const GaussianOptions& opt = {}) {
  detail::require(m >= 1, "sketch_gaussian_dense: m must be >= 1");
  const int p = resolve_threads(opt.threads);
  RowMajorHold rm(a);
  const DenseView av = rm.view();
  const index_t n = av.rows;
  const index_t d = av.cols;
  const GaussianField field = gaussian_field(seed);
  const double scale = opt.scale ? 1.0 / std::sqrt(static_cast<double>(m)) : 1.0;
  constexpr index_t kBlock = 64;
  DenseMatrix c(m, d, Layout::ColMajor);
  double* cd = c.data().data();
  index_t nnz = 0;
  for (double x : av.data) nnz += x != 0.0;

#pragma omp parallel for num_threads(p) schedule(static, 1)
  for (int t = 0; t < p; ++t) {
    const auto [i0, i1] = stripe(m, p, t);
    const index_t bt = i1 - i0;
    if (bt <= 0) continue;
    std::vector<double> g(static_cast<std::size_t>(bt * kBlock));  // column-major bt x kBlock
    for (index_t k0 = 0; k0 < n; k0 += kBlock) {
      const index_t kb = std::min(kBlock, n - k0);
      for (index_t kk = 0; kk < kb; ++kk) field.fill_column(k0 + kk, i0, i1, scale, g.data() + kk * bt);
      for (index_t j = 0; j < d; ++j) {
        double* col = cd + j * m + i0;
        for (index_t kk = 0; kk < kb; ++kk) {
          const double v = av.row(k0 + kk)[j];
          if (v == 0.0) continue;
          const double* gk = g.data() + kk * bt;
          for (index_t i = 0; i < bt; ++i) col[i] += gk[i] * v;
        }
      }
    }
  }
  if (opt.stats) {
    opt.stats->flops += 2 * nnz * m;
    opt.stats->accumulate_flops += 2 * nnz * m;
    opt.stats->randn += m * n;
    opt.stats->aux_bytes += m * kBlock * static_cast<index_t>(sizeof(double));
  }
  return c;
}

}  // namespace sketchlab
