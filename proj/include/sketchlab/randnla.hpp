// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sketchlab/countsketch.hpp"
#include "sketchlab/gaussian.hpp"
#include "sketchlab/gram.hpp"
#include "sketchlab/linalg.hpp"
#include "sketchlab/matrix.hpp"
#include "sketchlab/random.hpp"
#include "sketchlab/rownorms.hpp"

namespace sketchlab {

/// m = 2d Gaussian rows and r = d^2 CountSketch rows.
inline SketchConfig default_sketch_config(index_t d, std::uint64_t seed = 0) {
  SketchConfig cfg;
  cfg.m = 2 * d;
  cfg.r = std::max<index_t>(1, d * d);
  cfg.seed = seed;
  return cfg;
}

/// Columns of the leverage projection for n rows and relative accuracy eps.
inline index_t projection_columns(index_t n, double eps) {
  detail::require(n >= 2 && eps > 0.0, "projection_columns: need n >= 2 and eps > 0");
  return static_cast<index_t>(std::ceil(8.0 * std::log(static_cast<double>(n)) / (eps * eps)));
}

struct CssResult {
  std::vector<index_t> selected;
  std::vector<index_t> permutation;
};

struct LeverageScores {
  std::vector<double> theta;
  index_t k = 0;
};

struct PrecondResult {
  std::vector<double> x;
  int iterations = 0;
  /// sigma_1 / sigma_k of the sketch, an estimate of cond(A).
  double cond_estimate = 0.0;
  /// Relative normal-equation residual after each iteration.
  std::vector<double> residuals;
};

struct AppOptions {
  int threads = 0;
  GramAlgo gram_algo = GramAlgo::RowPart;
  /// Test hook for column_subset_select: use B = A (requires m = 0).
  bool identity_sketch = false;
  /// Test hook for leverage_sketched: Pi = I, so theta is exact in the sketch basis.
  bool identity_projection = false;
};

/// Inputs accepted by the application layer: CSR or dense views.
template <typename T>
concept SketchInput = std::same_as<T, CsrView> || std::same_as<T, DenseView>;

namespace detail {

inline DenseMatrix gram_of(const CsrView& a, const AppOptions& opt) { return gram_matrix(a, opt.gram_algo, opt.threads); }
inline DenseMatrix gram_of(const DenseView& a, const AppOptions& opt) { return gram_matrix(a, opt.gram_algo, opt.threads); }

inline DenseMatrix dense_of(const CsrView& a) { return to_dense(a); }
inline DenseMatrix dense_of(const DenseView& a) { return to_matrix(a); }

inline void check_rhs(index_t n, std::span<const double> b, const char* who) {
  require(static_cast<index_t>(b.size()) == n, std::string(who) + ": b has length " + std::to_string(b.size()) +
                                                   ", A has " + std::to_string(n) + " rows");
}

// V_k * diag(1/s_k) as a d x k matrix.
inline DenseMatrix scaled_basis(const DenseMatrix& v, std::span<const double> s, index_t k) {
  DenseMatrix x(v.rows(), k, Layout::RowMajor);
  for (index_t i = 0; i < v.rows(); ++i)
    for (index_t j = 0; j < k; ++j) x(i, j) = v(i, j) / s[j];
  return x;
}

// Rank and singular values of A from the symmetric factorization of A^T A.
struct GramFactor {
  DenseMatrix v;
  std::vector<double> sigma_a;
  index_t k;
};

inline GramFactor factor_gram(const DenseMatrix& g, double rcond) {
  SvdFactors f = jacobi_svd(g.view());
  std::vector<double> sa(f.sigma.size());
  for (std::size_t i = 0; i < sa.size(); ++i) sa[i] = std::sqrt(std::max(0.0, f.sigma[i]));
  const index_t k = numerical_rank(sa, rcond);
  return {std::move(f.v), std::move(sa), k};
}

}  // namespace detail

/// Column subset selection: pivoted QR on the sketch G*S*A (S*A when m = 0).
/// The first k pivots are selected; cfg.k = 0 selects the numerical rank of
/// the sketch (|R_jj| > rcond * |R_00|).
template <SketchInput Input>
CssResult column_subset_select(const Input& a, const SketchConfig& cfg, const AppOptions& opt = {}) {
  cfg.validate();
  DenseMatrix b;
  if (opt.identity_sketch) {
    detail::require(cfg.m == 0, "column_subset_select: identity sketch requires m = 0");
    b = detail::dense_of(a);
  } else {
    b = countgauss(a, cfg, opt.threads);
  }
  const PivotedQr qr = pivoted_qr(b.view());
  const index_t d = detail::input_cols(a);
  const index_t k = cfg.k > 0 ? std::min(cfg.k, d) : qr.rank(cfg.rcond);
  CssResult out;
  out.permutation = qr.permutation;
  out.selected.assign(qr.permutation.begin(), qr.permutation.begin() + k);
  return out;
}

/// Least squares through the Gram matrix: x = V * Sigma^+ * V^T * A^T b with
/// V, Sigma from A^T A. Singular values of A (square roots of those of A^T A)
/// at or below rcond * sigma_1 are dropped.
template <SketchInput Input>
std::vector<double> lstsq_gram(const Input& a, std::span<const double> b, double rcond, const AppOptions& opt = {}) {
  detail::check_rhs(detail::input_rows(a), b, "lstsq_gram");
  detail::require(rcond >= 0.0, "lstsq_gram: rcond must be >= 0");
  const detail::GramFactor f = detail::factor_gram(detail::gram_of(a, opt), rcond);
  const std::vector<double> c = rmatvec(a, b);
  const index_t d = detail::input_cols(a);
  std::vector<double> x(static_cast<std::size_t>(d), 0.0);
  for (index_t j = 0; j < f.k; ++j) {
    double s = 0.0;
    for (index_t i = 0; i < d; ++i) s += f.v(i, j) * c[i];
    s /= f.sigma_a[j] * f.sigma_a[j];
    for (index_t i = 0; i < d; ++i) x[i] += s * f.v(i, j);
  }
  return x;
}

/// Sketch-and-solve: [A~ b~] = G*S*[A b] (S*[A b] when m = 0), then the small
/// problem min ||A~ x - b~|| through a truncated SVD of A~.
template <SketchInput Input>
std::vector<double> lstsq_sketch_solve(const Input& a, std::span<const double> b, const SketchConfig& cfg,
                                       const AppOptions& opt = {}) {
  detail::check_rhs(detail::input_rows(a), b, "lstsq_sketch_solve");
  const auto ab = append_column(a, b);
  const DenseMatrix sk = countgauss(Input(ab), cfg, opt.threads);
  const index_t d = detail::input_cols(a);
  std::vector<index_t> cols(static_cast<std::size_t>(d));
  for (index_t j = 0; j < d; ++j) cols[j] = j;
  const DenseMatrix at = select_columns(sk.view(), cols);
  const SvdResult svd = truncated_svd(at.view(), cfg.rcond);
  std::vector<double> x(static_cast<std::size_t>(d), 0.0);
  for (index_t j = 0; j < svd.k; ++j) {
    double s = 0.0;
    for (index_t i = 0; i < sk.rows(); ++i) s += svd.u(i, j) * sk(i, d);
    s /= svd.sigma[j];
    for (index_t i = 0; i < d; ++i) x[i] += s * svd.v(i, j);
  }
  return x;
}

/// Minimizes ||A*N*y - b|| by conjugate residuals on (AN)^T AN y = (AN)^T b,
/// touching A only through products with AN and (AN)^T, and returns x = N*y.
/// Stops when ||(AN)^T (b - AN y)|| <= tol * ||(AN)^T b||, confirmed on the
/// recomputed residual. Throws ConvergenceError with the best x after maxit.
template <SketchInput Input>
PrecondResult lstsq_preconditioned_cr(const Input& a, std::span<const double> b, const DenseMatrix& n_mat, double tol,
                                      int maxit) {
  detail::check_rhs(detail::input_rows(a), b, "lstsq_preconditioned_cr");
  detail::require(n_mat.rows() == detail::input_cols(a), "lstsq_preconditioned_cr: N must have d rows");
  detail::require(tol > 0.0 && maxit >= 0, "lstsq_preconditioned_cr: need tol > 0 and maxit >= 0");
  const index_t k = n_mat.cols();
  auto apply_n = [&](std::span<const double> y) { return matvec(n_mat.view(), y); };
  auto apply_nt = [&](std::span<const double> z) { return rmatvec(n_mat.view(), z); };
  auto op = [&](std::span<const double> y) { return matvec(a, apply_n(y)); };           // A N y
  auto op_t = [&](std::span<const double> u) { return apply_nt(rmatvec(a, u)); };       // (AN)^T u
  auto normal = [&](std::span<const double> y) { return op_t(op(y)); };

  PrecondResult out;
  std::vector<double> y(static_cast<std::size_t>(k), 0.0);
  const std::vector<double> rhs = op_t(b);
  const double norm0 = norm2(rhs);
  if (norm0 == 0.0) {
    out.x.assign(static_cast<std::size_t>(n_mat.rows()), 0.0);
    return out;
  }
  std::vector<double> r = rhs;
  std::vector<double> mr = normal(r);
  std::vector<double> p = r;
  std::vector<double> mp = mr;
  double rmr = dot(r, mr);
  std::vector<double> best_y = y;
  double best = 1.0;

  for (int it = 1; it <= maxit; ++it) {
    const double mpmp = dot(mp, mp);
    if (!(mpmp > 0.0) || !(rmr > 0.0)) break;
    const double alpha = rmr / mpmp;
    for (index_t i = 0; i < k; ++i) {
      y[i] += alpha * p[i];
      r[i] -= alpha * mp[i];
    }
    double rel = norm2(r) / norm0;
    if (rel <= tol) {
      // the recurrence drifts; confirm on the true residual and restart if needed
      std::vector<double> ay = op(y);
      std::vector<double> res(b.begin(), b.end());
      for (std::size_t i = 0; i < res.size(); ++i) res[i] -= ay[i];
      r = op_t(res);
      rel = norm2(r) / norm0;
      if (rel > tol) {
        mr = normal(r);
        p = r;
        mp = mr;
        rmr = dot(r, mr);
        out.residuals.push_back(rel);
        out.iterations = it;
        if (rel < best) best = rel, best_y = y;
        continue;
      }
    }
    out.residuals.push_back(rel);
    out.iterations = it;
    if (rel < best) best = rel, best_y = y;
    if (rel <= tol) {
      out.x = apply_n(y);
      return out;
    }
    mr = normal(r);
    const double rmr_next = dot(r, mr);
    const double beta = rmr_next / rmr;
    rmr = rmr_next;
    for (index_t i = 0; i < k; ++i) {
      p[i] = r[i] + beta * p[i];
      mp[i] = mr[i] + beta * mp[i];
    }
  }
  throw ConvergenceError("lstsq: relative normal residual " + std::to_string(best) + " above tolerance after " +
                             std::to_string(out.iterations) + " iterations",
                         apply_n(best_y), out.iterations, best);
}

/// Sketch-and-precondition least squares. The sketch G*S*A (S*A when m = 0)
/// gives N = V * Sigma^-1 on its retained singular values; the iteration then
/// runs on the well-conditioned A*N.
template <SketchInput Input>
PrecondResult lstsq_precond(const Input& a, std::span<const double> b, const SketchConfig& cfg, double tol = 1e-10,
                            int maxit = 100, const AppOptions& opt = {}) {
  detail::check_rhs(detail::input_rows(a), b, "lstsq_precond");
  const DenseMatrix sk = countgauss(a, cfg, opt.threads);
  const SvdResult svd = truncated_svd(sk.view(), cfg.rcond);
  detail::require(svd.k >= 1, "lstsq_precond: the sketch is numerically zero");
  const DenseMatrix n_mat = detail::scaled_basis(svd.v, svd.sigma, svd.k);
  PrecondResult out = lstsq_preconditioned_cr(a, b, n_mat, tol, maxit);
  out.cond_estimate = svd.sigma[0] / svd.sigma[svd.k - 1];
  return out;
}

/// The same iteration with N = I.
template <SketchInput Input>
PrecondResult lstsq_unpreconditioned(const Input& a, std::span<const double> b, double tol = 1e-10, int maxit = 100) {
  return lstsq_preconditioned_cr(a, b, DenseMatrix::identity(detail::input_cols(a)), tol, maxit);
}

/// theta_i = ||e_i^T A V Sigma^-1||^2 with V, Sigma from A^T A, restricted to
/// singular values of A above rcond * sigma_1.
template <SketchInput Input>
LeverageScores leverage_exact(const Input& a, double rcond, const AppOptions& opt = {}) {
  detail::require(rcond >= 0.0, "leverage_exact: rcond must be >= 0");
  const detail::GramFactor f = detail::factor_gram(detail::gram_of(a, opt), rcond);
  LeverageScores out;
  out.k = f.k;
  out.theta.assign(static_cast<std::size_t>(detail::input_rows(a)), 0.0);
  if (f.k == 0) return out;
  const DenseMatrix x = detail::scaled_basis(f.v, f.sigma_a, f.k);
  out.theta = squared_row_norms(a, x.view(), opt.threads);
  return out;
}

/// Leverage scores of the column subset chosen by column_subset_select.
template <SketchInput Input>
LeverageScores leverage_css_exact(const Input& a, const SketchConfig& cfg, const AppOptions& opt = {}) {
  const CssResult css = column_subset_select(a, cfg, opt);
  const auto ak = select_columns(a, css.selected);
  return leverage_exact(Input(ak), cfg.rcond, opt);
}

/// Approximate leverage scores: A~ = G*S*A (S*A when m = 0, r = cfg.r rows),
/// X = V~ Sigma~^-1 Pi with Pi a k x r2 Gaussian scaled by 1/sqrt(r2), and
/// theta~_i = ||e_i^T A X||^2. Singular values of A~ at or below
/// rcond * sigma_1 are dropped before forming X.
template <SketchInput Input>
LeverageScores leverage_sketched(const Input& a, double rcond, const SketchConfig& cfg, index_t r2,
                                 const AppOptions& opt = {}) {
  detail::require(rcond >= 0.0, "leverage_sketched: rcond must be >= 0");
  detail::require(opt.identity_projection || r2 >= 1, "leverage_sketched: r2 must be >= 1");
  const DenseMatrix sk = countgauss(a, cfg, opt.threads);
  const SvdResult svd = truncated_svd(sk.view(), rcond);
  LeverageScores out;
  out.k = svd.k;
  out.theta.assign(static_cast<std::size_t>(detail::input_rows(a)), 0.0);
  if (svd.k == 0) return out;
  const DenseMatrix basis = detail::scaled_basis(svd.v, svd.sigma, svd.k);
  if (opt.identity_projection) {
    out.theta = squared_row_norms(a, basis.view(), opt.threads);
    return out;
  }
  const GaussianField field(cfg.seed, StreamKind::Projection);
  DenseMatrix pi(svd.k, r2, Layout::RowMajor);
  const double scale = 1.0 / std::sqrt(static_cast<double>(r2));
  for (index_t i = 0; i < svd.k; ++i)
    for (index_t j = 0; j < r2; ++j) pi(i, j) = field(i, j) * scale;
  const DenseMatrix x = matmul(basis.view(), pi.view());
  out.theta = squared_row_norms(a, x.view(), opt.threads);
  return out;
}

/// leverage_sketched on the column subset chosen by column_subset_select.
template <SketchInput Input>
LeverageScores leverage_css_sketched(const Input& a, double rcond, const SketchConfig& cfg, index_t r2,
                                     const AppOptions& opt = {}) {
  const CssResult css = column_subset_select(a, cfg, opt);
  const auto ak = select_columns(a, css.selected);
  return leverage_sketched(Input(ak), rcond, cfg, r2, opt);
}

}  // namespace sketchlab
