// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Endpoint-named entry points for scripting bindings. Arrays arrive as raw
// strided buffers; a buffer already laid out as the kernel needs is viewed in
// place, anything else is rejected with a LayoutError naming the expected
// layout. Nothing is copied behind the caller's back.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sketchlab/countsketch.hpp"
#include "sketchlab/gaussian.hpp"
#include "sketchlab/gram.hpp"
#include "sketchlab/matrix.hpp"
#include "sketchlab/randnla.hpp"
#include "sketchlab/rownorms.hpp"

namespace sketchlab::api {

class LayoutError : public InputError {
 public:
  using InputError::InputError;
};

/// A 2-D float64 buffer as a binding sees it: strides in elements.
struct StridedArray {
  const double* data = nullptr;
  index_t rows = 0;
  index_t cols = 0;
  index_t row_stride = 0;
  index_t col_stride = 0;
};

struct MutableStridedArray {
  double* data = nullptr;
  index_t rows = 0;
  index_t cols = 0;
  index_t row_stride = 0;
  index_t col_stride = 0;
};

/// True iff the buffer is contiguous in `layout` order.
inline bool contiguous_in(index_t rows, index_t cols, index_t rs, index_t cs, Layout layout) {
  if (rows <= 1 && cols <= 1) return true;
  if (layout == Layout::RowMajor) return (cols <= 1 || cs == 1) && (rows <= 1 || rs == cols);
  return (rows <= 1 || rs == 1) && (cols <= 1 || cs == rows);
}

/// Whether the last conversion on this thread viewed the caller's memory directly.
struct Diagnostics {
  bool zero_copy = false;
};

inline Diagnostics& diagnostics() {
  thread_local Diagnostics d;
  return d;
}

inline DenseView view(const StridedArray& a, Layout expected, const char* who) {
  if (!contiguous_in(a.rows, a.cols, a.row_stride, a.col_stride, expected)) {
    diagnostics().zero_copy = false;
    throw LayoutError(std::string(who) + ": expected a contiguous " + to_string(expected) + " float64 array");
  }
  diagnostics().zero_copy = true;
  return {a.rows, a.cols, expected, {a.data, static_cast<std::size_t>(a.rows * a.cols)}};
}

inline DenseSpan view(const MutableStridedArray& a, Layout expected, const char* who) {
  if (!contiguous_in(a.rows, a.cols, a.row_stride, a.col_stride, expected)) {
    diagnostics().zero_copy = false;
    throw LayoutError(std::string(who) + ": expected a contiguous " + to_string(expected) + " float64 array");
  }
  diagnostics().zero_copy = true;
  return {a.rows, a.cols, expected, {a.data, static_cast<std::size_t>(a.rows * a.cols)}};
}

/// Keyword-style options shared by every endpoint.
struct CallOptions {
  std::uint64_t seed = 0;
  int threads = 0;
  GramAlgo gram_algo = GramAlgo::RowPart;
  bool scale_gaussian = true;
};

/// G*S*A for CSR A, m x d row-major.
inline DenseMatrix csrcgs(const CsrView& a, index_t m, index_t r, const CallOptions& o = {}) {
  SketchConfig cfg;
  cfg.m = m;
  cfg.r = r;
  cfg.seed = o.seed;
  cfg.scale_gaussian = o.scale_gaussian;
  detail::require(m >= 1, "csrcgs: m must be >= 1");
  return countgauss(a, cfg, o.threads);
}

/// G*A for CSR A, m x d column-major.
inline DenseMatrix csrjlt(const CsrView& a, index_t m, const CallOptions& o = {}) {
  GaussianOptions g;
  g.scale = o.scale_gaussian;
  g.threads = o.threads;
  return sketch_gaussian_csr(a, m, o.seed, g);
}

/// C <- alpha*A^T*A + beta*C in place; C must be row-major d x d.
inline void csrrk(double alpha, const CsrView& a, double beta, const MutableStridedArray& c, const CallOptions& o = {}) {
  gram(a, alpha, beta, view(c, Layout::RowMajor, "csrrk"), o.gram_algo, o.threads);
}

/// x <- alpha*rownorms(A*B)^2 + beta*x in place.
inline void csrsqn(double alpha, const CsrView& a, const StridedArray& b, double beta, std::span<double> x,
                   const CallOptions& o = {}) {
  const DenseView bv = view(b, Layout::RowMajor, "csrsqn");
  sqn_csr(a, bv, alpha, beta, x, o.threads);
}

/// G*S*A for row-major dense A.
inline DenseMatrix rmcgs(const StridedArray& a, index_t m, index_t r, const CallOptions& o = {}) {
  const DenseView av = view(a, Layout::RowMajor, "rmcgs");
  SketchConfig cfg;
  cfg.m = m;
  cfg.r = r;
  cfg.seed = o.seed;
  cfg.scale_gaussian = o.scale_gaussian;
  detail::require(m >= 1, "rmcgs: m must be >= 1");
  return countgauss(av, cfg, o.threads);
}

inline void rmsqn(double alpha, const StridedArray& a, const StridedArray& b, double beta, std::span<double> x,
                  const CallOptions& o = {}) {
  const DenseView av = view(a, Layout::RowMajor, "rmsqn");
  const DenseView bv = view(b, Layout::RowMajor, "rmsqn");
  sqn_dense(av, bv, alpha, beta, x, o.threads);
}

/// Column subset selection with k = numerical rank of the sketch.
inline std::vector<index_t> sample_columns(const CsrView& a, double rcond, index_t m, index_t r,
                                           const CallOptions& o = {}) {
  SketchConfig cfg;
  cfg.m = m;
  cfg.r = r;
  cfg.rcond = rcond;
  cfg.seed = o.seed;
  cfg.scale_gaussian = o.scale_gaussian;
  AppOptions app;
  app.threads = o.threads;
  return column_subset_select(a, cfg, app).selected;
}

/// Exact leverage scores through the Gram pseudoinverse.
inline std::vector<double> ls_via_inv_gram(const CsrView& a, double rcond, const CallOptions& o = {}) {
  AppOptions app;
  app.threads = o.threads;
  app.gram_algo = o.gram_algo;
  return leverage_exact(a, rcond, app).theta;
}

/// Approximate leverage scores through a sketched SVD.
inline std::vector<double> ls_via_sketched_svd(const CsrView& a, double rcond, index_t m, index_t r1, index_t r2,
                                               const CallOptions& o = {}) {
  SketchConfig cfg;
  cfg.m = m;
  cfg.r = r1;
  cfg.seed = o.seed;
  cfg.scale_gaussian = o.scale_gaussian;
  AppOptions app;
  app.threads = o.threads;
  return leverage_sketched(a, rcond, cfg, r2, app).theta;
}

/// Exact leverage scores of the columns chosen by sample_columns.
inline std::vector<double> ls_hrn_exact(const CsrView& a, double rcond, index_t m, index_t r, const CallOptions& o = {}) {
  SketchConfig cfg;
  cfg.m = m;
  cfg.r = r;
  cfg.rcond = rcond;
  cfg.seed = o.seed;
  cfg.scale_gaussian = o.scale_gaussian;
  AppOptions app;
  app.threads = o.threads;
  app.gram_algo = o.gram_algo;
  return leverage_css_exact(a, cfg, app).theta;
}

/// Approximate leverage scores of the columns chosen by sample_columns.
inline std::vector<double> ls_hrn_approx(const CsrView& a, double rcond, index_t m, index_t r1, index_t r2,
                                         const CallOptions& o = {}) {
  SketchConfig cfg;
  cfg.m = m;
  cfg.r = r1;
  cfg.rcond = rcond;
  cfg.seed = o.seed;
  cfg.scale_gaussian = o.scale_gaussian;
  AppOptions app;
  app.threads = o.threads;
  return leverage_css_sketched(a, rcond, cfg, r2, app).theta;
}

}  // namespace sketchlab::api
