// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "support.hpp"

namespace sketchlab {
namespace {

using testing::random_csr;
using testing::rel_fro;
using testing::to_eigen;

DenseMatrix run(GramAlgo algo, const CsrView& a, double alpha, double beta, const DenseMatrix& b0, int p,
                KernelStats* st = nullptr) {
  DenseMatrix b = b0;
  gram(a, alpha, beta, b.span(), algo, p, st);
  return b;
}

constexpr GramAlgo kAlgos[] = {GramAlgo::Serial, GramAlgo::LowMem, GramAlgo::RowPart};

TEST(Gram, IdentityInput) {
  const CsrMatrix eye = csr_from_triplets(3, 3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}});
  for (auto algo : kAlgos) EXPECT_TRUE(run(algo, eye.view(), 1.0, 0.0, DenseMatrix(3, 3), 2) == DenseMatrix::identity(3));
}

TEST(Gram, SmallHandExample) {
  const CsrMatrix a = csr_from_triplets(3, 2, {{0, 0, 1.0}, {1, 1, 2.0}, {2, 0, 3.0}});
  const DenseMatrix want(2, 2, Layout::RowMajor, {10.0, 0.0, 0.0, 4.0});
  for (auto algo : kAlgos) EXPECT_TRUE(run(algo, a.view(), 1.0, 0.0, DenseMatrix(2, 2), 2) == want);
}

TEST(Gram, AlphaZeroScalesOnly) {
  const CsrMatrix a = random_csr(30, 4, 0.4, 1);
  const DenseMatrix b0 = testing::random_dense(4, 4, 2);
  for (auto algo : kAlgos) {
    for (int p : {1, 3}) {
      const DenseMatrix b = run(algo, a.view(), 0.0, 2.0, b0, p);
      for (index_t i = 0; i < 4; ++i)
        for (index_t j = 0; j < 4; ++j) EXPECT_EQ(b(i, j), 2.0 * b0(i, j));
    }
  }
}

TEST(Gram, ZeroMatrixGivesBetaB) {
  const CsrMatrix z(50, 5);
  const DenseMatrix b0 = testing::random_dense(5, 5, 3);
  for (auto algo : kAlgos) {
    const DenseMatrix b = run(algo, z.view(), 1.0, -0.5, b0, 4);
    for (index_t i = 0; i < 5; ++i)
      for (index_t j = 0; j < 5; ++j) EXPECT_EQ(b(i, j), -0.5 * b0(i, j));
  }
}

TEST(Gram, AccumulatesOntoB) {
  const CsrMatrix a = random_csr(100, 6, 0.3, 4);
  const DenseMatrix b0 = testing::random_dense(6, 6, 5);
  const testing::MatrixXd want = 0.5 * to_eigen(a.view()).transpose() * to_eigen(a.view()) + 3.0 * to_eigen(b0.view());
  for (auto algo : kAlgos)
    for (int p : {1, 4}) EXPECT_LE(rel_fro(to_eigen(run(algo, a.view(), 0.5, 3.0, b0, p).view()), want), 1e-12);
}

TEST(Gram, SingleWorkerIsBitwiseSerial) {
  const CsrMatrix a = random_csr(400, 12, 0.05, 6);
  const DenseMatrix ref = run(GramAlgo::Serial, a.view(), 1.0, 0.0, DenseMatrix(12, 12), 1);
  EXPECT_TRUE(run(GramAlgo::LowMem, a.view(), 1.0, 0.0, DenseMatrix(12, 12), 1) == ref);
  EXPECT_TRUE(run(GramAlgo::RowPart, a.view(), 1.0, 0.0, DenseMatrix(12, 12), 1) == ref);
}

TEST(Gram, LowMemIsBitwiseSerialForAnyWorkerCount) {
  const CsrMatrix a = random_csr(400, 12, 0.05, 7);
  const DenseMatrix ref = run(GramAlgo::Serial, a.view(), 1.0, 0.0, DenseMatrix(12, 12), 1);
  for (int p : {2, 4, 5, 12, 20}) EXPECT_TRUE(run(GramAlgo::LowMem, a.view(), 1.0, 0.0, DenseMatrix(12, 12), p) == ref);
}

TEST(Gram, MatchesDenseOracle) {
  const CsrMatrix a = random_csr(400, 12, 0.05, 8);
  const testing::MatrixXd want = to_eigen(a.view()).transpose() * to_eigen(a.view());
  for (auto algo : kAlgos)
    for (int p : {1, 4}) EXPECT_LE(rel_fro(to_eigen(run(algo, a.view(), 1.0, 0.0, DenseMatrix(12, 12), p).view()), want), 1e-12);
}

TEST(Gram, RowPartAgreesAcrossWorkerCounts) {
  const CsrMatrix a = random_csr(1000, 16, 0.1, 9);
  const testing::MatrixXd want = to_eigen(a.view()).transpose() * to_eigen(a.view());
  std::vector<testing::MatrixXd> results;
  for (int p : {2, 4, 8}) {
    results.push_back(to_eigen(run(GramAlgo::RowPart, a.view(), 1.0, 0.0, DenseMatrix(16, 16), p).view()));
    EXPECT_LE(rel_fro(results.back(), want), 1e-12);
  }
  for (std::size_t i = 1; i < results.size(); ++i) EXPECT_LE(rel_fro(results[i], results[0]), 1e-12);
}

TEST(Gram, MoreWorkersThanRows) {
  const CsrMatrix a = random_csr(3, 5, 0.8, 10);
  const testing::MatrixXd want = to_eigen(a.view()).transpose() * to_eigen(a.view());
  for (auto algo : kAlgos) EXPECT_LE(rel_fro(to_eigen(run(algo, a.view(), 1.0, 0.0, DenseMatrix(5, 5), 8).view()), want), 1e-12);
}

TEST(Gram, SymmetricAndPositiveSemidefinite) {
  const CsrMatrix a = random_csr(600, 10, 0.2, 11);
  for (auto algo : kAlgos) {
    const DenseMatrix b = run(algo, a.view(), 1.0, 0.0, DenseMatrix(10, 10), 3);
    const auto e = to_eigen(b.view());
    for (index_t i = 0; i < 10; ++i)
      for (index_t j = 0; j < 10; ++j) EXPECT_LE(std::abs(e(i, j) - e(j, i)), 1e-14 * std::abs(e(i, j)));
    const auto ev = Eigen::SelfAdjointEigenSolver<testing::MatrixXd>(e).eigenvalues();
    EXPECT_GE(ev.minCoeff(), -1e-10 * e.norm());
  }
}

TEST(Gram, AccumulationFlopsEqualTwiceNnz2) {
  const CsrMatrix a = random_csr(500, 14, 0.1, 12);
  const index_t d = 14;
  for (auto algo : kAlgos) {
    for (int p : {1, 3, 8}) {
      KernelStats st;
      run(algo, a.view(), 1.0, 0.0, DenseMatrix(d, d), p, &st);
      EXPECT_EQ(st.accumulate_flops, 2 * nnz2(a.view())) << to_string(algo) << " p=" << p;
      const index_t base = 2 * nnz2(a.view()) + a.nnz() + d * d;
      EXPECT_EQ(st.flops, algo == GramAlgo::RowPart && p > 1 ? base + p * d * d : base);
    }
  }
}

TEST(Gram, RowPartAuxiliaryMemory) {
  const CsrMatrix a = random_csr(100, 9, 0.2, 13);
  KernelStats st;
  run(GramAlgo::RowPart, a.view(), 1.0, 0.0, DenseMatrix(9, 9), 4, &st);
  EXPECT_EQ(st.aux_bytes, 4 * 9 * 9 * static_cast<index_t>(sizeof(double)));
  KernelStats lm;
  run(GramAlgo::LowMem, a.view(), 1.0, 0.0, DenseMatrix(9, 9), 4, &lm);
  EXPECT_EQ(lm.aux_bytes, 0);
}

TEST(Gram, OutputShapeAndLayoutChecked) {
  const CsrMatrix a = random_csr(10, 3, 0.5, 14);
  DenseMatrix wrong(3, 4);
  EXPECT_THROW(gram_serial(a.view(), 1.0, 0.0, wrong.span()), InputError);
  DenseMatrix colmajor(3, 3, Layout::ColMajor);
  EXPECT_THROW(gram_parallel_lowmem(a.view(), 1.0, 0.0, colmajor.span(), 2), InputError);
}

TEST(Gram, DenseInputMatchesCsr) {
  const CsrMatrix a = random_csr(200, 7, 0.3, 15);
  const DenseMatrix gd = gram_matrix(to_dense(a.view(), Layout::ColMajor).view(), GramAlgo::RowPart, 3);
  const DenseMatrix gs = gram_matrix(a.view(), GramAlgo::Serial, 1);
  EXPECT_LE(rel_fro(to_eigen(gd.view()), to_eigen(gs.view())), 1e-14);
}

TEST(Gram, ParseAlgoNames) {
  EXPECT_EQ(parse_gram_algo("serial"), GramAlgo::Serial);
  EXPECT_EQ(parse_gram_algo("lowmem"), GramAlgo::LowMem);
  EXPECT_EQ(parse_gram_algo("rowpart"), GramAlgo::RowPart);
  EXPECT_FALSE(parse_gram_algo("fast").has_value());
}

}  // namespace
}  // namespace sketchlab
