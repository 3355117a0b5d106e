// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

// Shared helpers for the test suite: random instances and Eigen-based
// reference computations. Eigen appears only here and in test code.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "sketchlab/sketchlab.hpp"

namespace sketchlab::testing {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// n x d CSR with each entry present with probability `density`, values uniform in [-1, 1].
inline CsrMatrix random_csr(index_t n, index_t d, double density, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<Triplet> t;
  for (index_t i = 0; i < n; ++i)
    for (index_t j = 0; j < d; ++j)
      if (density >= 1.0 || keep(gen)) t.push_back({i, j, val(gen)});
  return csr_from_triplets(n, d, std::move(t));
}

inline DenseMatrix random_dense(index_t n, index_t d, std::uint64_t seed, Layout layout = Layout::RowMajor) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  DenseMatrix a(n, d, layout);
  for (index_t i = 0; i < n; ++i)
    for (index_t j = 0; j < d; ++j) a(i, j) = nd(gen);
  return a;
}

inline std::vector<double> random_vector(index_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = nd(gen);
  return v;
}

inline MatrixXd to_eigen(const DenseView& a) {
  MatrixXd m(a.rows, a.cols);
  for (index_t i = 0; i < a.rows; ++i)
    for (index_t j = 0; j < a.cols; ++j) m(i, j) = a(i, j);
  return m;
}

inline MatrixXd to_eigen(const CsrView& a) {
  MatrixXd m = MatrixXd::Zero(a.nrows, a.ncols);
  for (index_t i = 0; i < a.nrows; ++i)
    for (index_t h = a.rowptr[i]; h < a.rowptr[i + 1]; ++h) m(i, a.colidx[h]) = a.values[h];
  return m;
}

inline DenseMatrix from_eigen(const MatrixXd& m, Layout layout = Layout::RowMajor) {
  DenseMatrix a(m.rows(), m.cols(), layout);
  for (index_t i = 0; i < m.rows(); ++i)
    for (index_t j = 0; j < m.cols(); ++j) a(i, j) = m(i, j);
  return a;
}

inline VectorXd to_eigen(const std::vector<double>& v) { return Eigen::Map<const VectorXd>(v.data(), v.size()); }

inline double rel_fro(const MatrixXd& got, const MatrixXd& want) {
  const double den = want.norm();
  return den == 0.0 ? got.norm() : (got - want).norm() / den;
}

/// Random orthonormal n x k basis.
inline MatrixXd orthonormal(index_t n, index_t k, std::uint64_t seed) {
  MatrixXd g = to_eigen(random_dense(n, k, seed).view());
  Eigen::HouseholderQR<MatrixXd> qr(g);
  return qr.householderQ() * MatrixXd::Identity(n, k);
}

/// n x d matrix with singular values log-spaced from 1 down to 1/cond.
inline MatrixXd with_condition(index_t n, index_t d, double cond, std::uint64_t seed) {
  const MatrixXd u = orthonormal(n, d, seed);
  const MatrixXd v = orthonormal(d, d, seed + 1);
  VectorXd s(d);
  for (index_t i = 0; i < d; ++i) s[i] = std::pow(cond, -static_cast<double>(i) / std::max<index_t>(1, d - 1));
  return u * s.asDiagonal() * v.transpose();
}

/// Densified r x n Gaussian factor of G*S*A, drawn from the same streams.
inline MatrixXd countgauss_g(std::uint64_t seed, index_t m, index_t r, bool scaled) {
  const GaussianField f = countgauss_field(seed);
  const double s = scaled ? 1.0 / std::sqrt(static_cast<double>(m)) : 1.0;
  MatrixXd g(m, r);
  for (index_t i = 0; i < m; ++i)
    for (index_t j = 0; j < r; ++j) g(i, j) = f(i, j) * s;
  return g;
}

/// Least-squares minimizer through Eigen's column-pivoting Householder QR.
inline VectorXd qr_solve(const MatrixXd& a, const VectorXd& b) { return a.colPivHouseholderQr().solve(b); }

}  // namespace sketchlab::testing
