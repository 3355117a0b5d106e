// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "sketchlab/matrix.hpp"

namespace sketchlab {

// Small dense kernels for the factorization steps of the applications. They
// operate on sketches and Gram matrices (at most a few thousand rows) and are
// single-threaded.

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Row-major A*B.
inline DenseMatrix matmul(const DenseView& a, const DenseView& b) {
  detail::require(a.cols == b.rows, "matmul: inner dimensions differ");
  DenseMatrix c(a.rows, b.cols, Layout::RowMajor);
  for (index_t i = 0; i < a.rows; ++i) {
    double* ci = c.data().data() + i * b.cols;
    for (index_t k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (index_t j = 0; j < b.cols; ++j) ci[j] += aik * b(k, j);
    }
  }
  return c;
}

/// y = A*x
inline std::vector<double> matvec(const CsrView& a, std::span<const double> x) {
  detail::require(static_cast<index_t>(x.size()) == a.ncols, "matvec: length mismatch");
  std::vector<double> y(static_cast<std::size_t>(a.nrows), 0.0);
  for (index_t i = 0; i < a.nrows; ++i) {
    double s = 0.0;
    for (index_t h = a.rowptr[i]; h < a.rowptr[i + 1]; ++h) s += a.values[h] * x[a.colidx[h]];
    y[i] = s;
  }
  return y;
}

inline std::vector<double> matvec(const DenseView& a, std::span<const double> x) {
  detail::require(static_cast<index_t>(x.size()) == a.cols, "matvec: length mismatch");
  std::vector<double> y(static_cast<std::size_t>(a.rows), 0.0);
  for (index_t i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (index_t j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

/// y = A^T*x
inline std::vector<double> rmatvec(const CsrView& a, std::span<const double> x) {
  detail::require(static_cast<index_t>(x.size()) == a.nrows, "rmatvec: length mismatch");
  std::vector<double> y(static_cast<std::size_t>(a.ncols), 0.0);
  for (index_t i = 0; i < a.nrows; ++i) {
    const double xi = x[i];
    for (index_t h = a.rowptr[i]; h < a.rowptr[i + 1]; ++h) y[a.colidx[h]] += a.values[h] * xi;
  }
  return y;
}

inline std::vector<double> rmatvec(const DenseView& a, std::span<const double> x) {
  detail::require(static_cast<index_t>(x.size()) == a.rows, "rmatvec: length mismatch");
  std::vector<double> y(static_cast<std::size_t>(a.cols), 0.0);
  for (index_t i = 0; i < a.rows; ++i) {
    const double xi = x[i];
    for (index_t j = 0; j < a.cols; ++j) y[j] += a(i, j) * xi;
  }
  return y;
}

/// Thin factors B = U * diag(sigma) * V^T with sigma nonincreasing.
struct SvdFactors {
  DenseMatrix u;  // rows x p, p = min(rows, cols)
  std::vector<double> sigma;
  DenseMatrix v;  // cols x p
};

/// Retained part of an SVD after rcond truncation: columns of U and V
/// restricted to the k values with sigma_i > rcond * sigma_1.
struct SvdResult {
  DenseMatrix u;
  DenseMatrix v;
  std::vector<double> sigma;  // all singular values, nonincreasing
  index_t k = 0;
};

using SvdBackend = std::function<SvdFactors(const DenseView&)>;

namespace detail {

// One-sided (Hestenes) Jacobi on the columns of a tall matrix; rows >= cols.
inline SvdFactors jacobi_tall(const DenseView& b) {
  const index_t m = b.rows;
  const index_t n = b.cols;
  std::vector<double> w(static_cast<std::size_t>(m * n));  // column-major
  for (index_t j = 0; j < n; ++j)
    for (index_t i = 0; i < m; ++i) w[j * m + i] = b(i, j);
  std::vector<double> v(static_cast<std::size_t>(n * n), 0.0);  // column-major
  for (index_t j = 0; j < n; ++j) v[j * n + j] = 1.0;

  constexpr double tol = 4.0 * std::numeric_limits<double>::epsilon();
  constexpr int kMaxSweeps = 80;
  // columns at rounding level of the whole matrix carry no direction to fix
  double fro2 = 0.0;
  for (double x : w) fro2 += x * x;
  const double negligible = fro2 * std::numeric_limits<double>::epsilon() * std::numeric_limits<double>::epsilon();
  bool converged = n < 2;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (index_t p = 0; p + 1 < n; ++p) {
      for (index_t q = p + 1; q < n; ++q) {
        double* wp = w.data() + p * m;
        double* wq = w.data() + q * m;
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (index_t i = 0; i < m; ++i) {
          alpha += wp[i] * wp[i];
          beta += wq[i] * wq[i];
          gamma += wp[i] * wq[i];
        }
        if (alpha <= negligible || beta <= negligible) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (index_t i = 0; i < m; ++i) {
          const double x = wp[i];
          const double y = wq[i];
          wp[i] = c * x - s * y;
          wq[i] = s * x + c * y;
        }
        double* vp = v.data() + p * n;
        double* vq = v.data() + q * n;
        for (index_t i = 0; i < n; ++i) {
          const double x = vp[i];
          const double y = vq[i];
          vp[i] = c * x - s * y;
          vq[i] = s * x + c * y;
        }
      }
    }
  }
  if (!converged) throw NumericError("jacobi_svd: no convergence after 80 sweeps");

  std::vector<double> norms(static_cast<std::size_t>(n));
  for (index_t j = 0; j < n; ++j) norms[j] = norm2({w.data() + j * m, static_cast<std::size_t>(m)});
  std::vector<index_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](index_t a, index_t c) { return norms[a] > norms[c]; });

  SvdFactors f{DenseMatrix(m, n), std::vector<double>(static_cast<std::size_t>(n)), DenseMatrix(n, n)};
  for (index_t jj = 0; jj < n; ++jj) {
    const index_t j = order[jj];
    const double s = norms[j];
    f.sigma[jj] = s;
    for (index_t i = 0; i < m; ++i) f.u(i, jj) = s > 0.0 ? w[j * m + i] / s : 0.0;
    for (index_t i = 0; i < n; ++i) f.v(i, jj) = v[j * n + i];
  }
  return f;
}

}  // namespace detail

/// Thin SVD by one-sided Jacobi rotations.
inline SvdFactors jacobi_svd(const DenseView& b) {
  if (b.rows >= b.cols) return detail::jacobi_tall(b);
  const DenseMatrix bt = to_matrix(b).transposed();
  SvdFactors f = detail::jacobi_tall(bt.view());
  std::swap(f.u, f.v);
  return f;
}

inline index_t numerical_rank(std::span<const double> sigma, double rcond) {
  if (sigma.empty() || !(sigma[0] > 0.0)) return 0;
  index_t k = 0;
  while (k < static_cast<index_t>(sigma.size()) && sigma[k] > rcond * sigma[0]) ++k;
  return k;
}

/// SVD truncated to the singular values above rcond * sigma_1.
inline SvdResult truncated_svd(const DenseView& b, double rcond, const SvdBackend& backend = jacobi_svd) {
  detail::require(rcond >= 0.0, "truncated_svd: rcond must be >= 0");
  SvdFactors f = backend(b);
  const index_t k = numerical_rank(f.sigma, rcond);
  SvdResult out{DenseMatrix(b.rows, k), DenseMatrix(b.cols, k), std::move(f.sigma), k};
  for (index_t j = 0; j < k; ++j) {
    for (index_t i = 0; i < b.rows; ++i) out.u(i, j) = f.u(i, j);
    for (index_t i = 0; i < b.cols; ++i) out.v(i, j) = f.v(i, j);
  }
  return out;
}

/// Householder QR with column pivoting (largest remaining column norm first,
/// norms downdated and recomputed when cancellation is detected).
struct PivotedQr {
  std::vector<index_t> permutation;  // permutation[j] = original column placed at position j
  std::vector<double> r_diagonal;    // |R_jj|, nonincreasing up to rounding

  /// Number of leading |R_jj| above rcond * |R_00|.
  index_t rank(double rcond) const { return numerical_rank(r_diagonal, rcond); }
};

inline PivotedQr pivoted_qr(const DenseView& b) {
  const index_t m = b.rows;
  const index_t n = b.cols;
  std::vector<double> a(static_cast<std::size_t>(m * n));  // column-major work copy
  for (index_t j = 0; j < n; ++j)
    for (index_t i = 0; i < m; ++i) a[j * m + i] = b(i, j);
  auto col = [&](index_t j) { return a.data() + j * m; };

  PivotedQr out;
  out.permutation.resize(static_cast<std::size_t>(n));
  std::iota(out.permutation.begin(), out.permutation.end(), 0);
  std::vector<double> vn1(static_cast<std::size_t>(n)), vn2(static_cast<std::size_t>(n));
  for (index_t j = 0; j < n; ++j) vn1[j] = vn2[j] = norm2({col(j), static_cast<std::size_t>(m)});
  const double tol3z = std::sqrt(std::numeric_limits<double>::epsilon());

  const index_t steps = std::min(m, n);
  out.r_diagonal.assign(static_cast<std::size_t>(steps), 0.0);
  for (index_t j = 0; j < steps; ++j) {
    index_t piv = j;
    for (index_t l = j + 1; l < n; ++l)
      if (vn1[l] > vn1[piv]) piv = l;
    if (piv != j) {
      std::swap_ranges(col(j), col(j) + m, col(piv));
      std::swap(out.permutation[j], out.permutation[piv]);
      std::swap(vn1[j], vn1[piv]);
      std::swap(vn2[j], vn2[piv]);
    }
    // Householder reflector for a[j:m, j]
    double* x = col(j);
    const double alpha = x[j];
    double sigma2 = 0.0;
    for (index_t i = j + 1; i < m; ++i) sigma2 += x[i] * x[i];
    const double xnorm = std::sqrt(alpha * alpha + sigma2);
    if (xnorm == 0.0) {
      out.r_diagonal[j] = 0.0;
      continue;
    }
    const double beta = alpha >= 0.0 ? -xnorm : xnorm;
    const double tau = (beta - alpha) / beta;
    const double scale = 1.0 / (alpha - beta);
    for (index_t i = j + 1; i < m; ++i) x[i] *= scale;
    x[j] = beta;
    out.r_diagonal[j] = std::abs(beta);
    for (index_t l = j + 1; l < n; ++l) {
      double* y = col(l);
      double s = y[j];
      for (index_t i = j + 1; i < m; ++i) s += x[i] * y[i];
      s *= tau;
      y[j] -= s;
      for (index_t i = j + 1; i < m; ++i) y[i] -= s * x[i];
    }
    for (index_t l = j + 1; l < n; ++l) {
      if (vn1[l] == 0.0) continue;
      double temp = std::abs(col(l)[j]) / vn1[l];
      temp = std::max(0.0, 1.0 - temp * temp);
      const double ratio = vn1[l] / vn2[l];
      if (temp * ratio * ratio <= tol3z) {
        vn1[l] = j + 1 < m ? norm2({col(l) + j + 1, static_cast<std::size_t>(m - j - 1)}) : 0.0;
        vn2[l] = vn1[l];
      } else {
        vn1[l] *= std::sqrt(temp);
      }
    }
  }
  return out;
}

}  // namespace sketchlab
