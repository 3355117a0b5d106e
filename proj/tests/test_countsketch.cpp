// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "support.hpp"

namespace sketchlab {
namespace {

using testing::random_csr;
using testing::rel_fro;
using testing::to_eigen;

const std::vector<index_t> kExampleVector{+4, +2, -5, -6, +1, +6, -6, +2, +1, -5, +5, +3};

// The 6 x 12 reference matrix for the example vector as published, 1-based (row, col, sign).
struct Entry {
  int row, col, sign;
};
const std::vector<Entry> kExampleMatrix{{1, 5, -1}, {1, 9, +1}, {2, 2, +1},  {2, 8, +1},  {3, 12, +1}, {4, 1, +1},
                                       {5, 3, -1}, {5, 10, -1}, {5, 11, +1}, {6, 4, -1}, {6, 6, +1},  {6, 7, -1}};

TEST(BlockCountSketch, OneSignedNonzeroPerColumn) {
  for (auto variant : {SketchVariant::Coo, SketchVariant::Bccs}) {
    BuildOptions opt;
    opt.variant = variant;
    opt.threads = 3;
    const auto s = build_countsketch(6, 12, 99, opt);
    EXPECT_EQ(s.stored_entries(), 12);
    const DenseMatrix d = s.densify();
    for (index_t k = 0; k < 12; ++k) {
      double sum = 0.0;
      int nz = 0;
      for (index_t i = 0; i < 6; ++i) {
        sum += d(i, k);
        nz += d(i, k) != 0.0;
      }
      EXPECT_EQ(nz, 1);
      EXPECT_TRUE(sum == 1.0 || sum == -1.0);
    }
  }
}

TEST(BlockCountSketch, VariantsAndWorkerCountsAgree) {
  const index_t r = 37, n = 1001;
  BuildOptions coo;
  coo.threads = 1;
  const DenseMatrix ref = build_countsketch(r, n, 5, coo).densify();
  for (int p : {1, 2, 4, 7}) {
    for (auto variant : {SketchVariant::Coo, SketchVariant::Bccs}) {
      BuildOptions opt;
      opt.variant = variant;
      opt.threads = p;
      const auto s = build_countsketch(r, n, 5, opt);
      EXPECT_TRUE(s.densify() == ref) << "p=" << p;
      EXPECT_EQ(to_vector(s).v, to_vector(build_countsketch(r, n, 5, coo)).v);
    }
  }
}

TEST(BlockCountSketch, ExplicitBlockShapesDoNotChangeTheMatrix) {
  BuildOptions a;
  a.n_r = 1;
  a.n_c = 1;
  BuildOptions b;
  b.n_r = 16;
  b.n_c = 300;
  EXPECT_TRUE(build_countsketch(16, 300, 8, a).densify() == build_countsketch(16, 300, 8, b).densify());
}

TEST(BlockCountSketch, ExampleVectorDensifiesToReferenceMatrix) {
  const BlockCountSketch s = from_vector({6, kExampleVector}, 2, 4, SketchVariant::Coo);
  const DenseMatrix d = s.densify();
  EXPECT_EQ(d(4, 2), -1.0);  // 1-based (5, 3)
  int mismatches = 0;
  for (const auto& e : kExampleMatrix) {
    if (d(e.row - 1, e.col - 1) != e.sign) {
      ++mismatches;
      // the published matrix and its vector disagree on this entry only
      EXPECT_EQ(e.row, 1);
      EXPECT_EQ(e.col, 5);
      EXPECT_EQ(d(0, 4), +1.0);
    }
  }
  EXPECT_EQ(mismatches, 1);
  double total = 0.0;
  for (double x : d.data()) total += std::abs(x);
  EXPECT_EQ(total, 12.0);
}

TEST(BlockCountSketch, VectorRoundTrip) {
  BuildOptions opt;
  opt.n_r = 3;
  opt.n_c = 5;
  const auto s = build_countsketch(10, 23, 3, opt);
  const auto v = to_vector(s);
  for (auto variant : {SketchVariant::Coo, SketchVariant::Bccs}) {
    const auto t = from_vector(v, variant == SketchVariant::Bccs ? 1 : 4, 7, variant);
    EXPECT_TRUE(t.densify() == s.densify());
    EXPECT_EQ(to_vector(t).v, v.v);
  }
}

TEST(BlockCountSketch, SingleColumn) {
  const auto s = from_vector({1, {-1}}, 1, 1, SketchVariant::Bccs);
  const DenseMatrix d = s.densify();
  EXPECT_EQ(d.rows(), 1);
  EXPECT_EQ(d.cols(), 1);
  EXPECT_EQ(d(0, 0), -1.0);
}

TEST(BlockCountSketch, InvalidInputs) {
  EXPECT_THROW(from_vector({3, {1, 4}}, 1, 1, SketchVariant::Coo), InputError);
  EXPECT_THROW(from_vector({3, {1, 0}}, 1, 1, SketchVariant::Coo), InputError);
  EXPECT_THROW(from_vector({3, {-4}}, 1, 1, SketchVariant::Coo), InputError);
  EXPECT_THROW(build_countsketch(0, 5, 1), InputError);
  EXPECT_THROW(build_countsketch(5, 0, 1), InputError);
  EXPECT_THROW(BlockCountSketch(4, 4, 2, 2, SketchVariant::Bccs), InputError);
  EXPECT_THROW(BlockCountSketch(4, 4, 5, 2, SketchVariant::Coo), InputError);
}

TEST(BlockCountSketch, StorageFootprint) {
  const index_t r = 12, n = 1000;
  BuildOptions coo;
  coo.n_r = 4;
  coo.n_c = 100;
  const auto a = build_countsketch(r, n, 2, coo);
  EXPECT_EQ(a.footprint().indices, 2 * n);
  EXPECT_EQ(a.footprint().block_handles, 3 * 10);
  BuildOptions bccs;
  bccs.variant = SketchVariant::Bccs;
  bccs.n_c = 100;
  const auto b = build_countsketch(r, n, 2, bccs);
  EXPECT_EQ(b.footprint().indices, n);
  EXPECT_EQ(b.footprint().block_handles, r * 10);
}

TEST(BlockCountSketch, BuildDrawCounts) {
  KernelStats st;
  BuildOptions opt;
  opt.stats = &st;
  build_countsketch(50, 777, 1, opt);
  EXPECT_EQ(st.randi, 777);
  EXPECT_EQ(st.randb, 777);
}

TEST(MultiplySa, IdentityPattern) {
  const CsrMatrix a = random_csr(9, 4, 0.5, 1);
  CountSketchVector v{9, {}};
  for (index_t k = 1; k <= 9; ++k) v.v.push_back(k);
  const auto s = from_vector(v, 3, 4, SketchVariant::Coo);
  const DenseMatrix c = multiply_sa(s, a.view(), 2);
  EXPECT_TRUE(c == to_dense(a.view()));
}

TEST(MultiplySa, SingleRowSums) {
  const CsrMatrix a = random_csr(2, 5, 1.0, 2);
  const auto s = from_vector({1, {1, 1}}, 1, 2, SketchVariant::Bccs);
  const DenseMatrix c = multiply_sa(s, a.view(), 1);
  const DenseMatrix d = to_dense(a.view());
  for (index_t j = 0; j < 5; ++j) EXPECT_EQ(c(0, j), d(0, j) + d(1, j));
}

TEST(MultiplySa, MatchesDenseOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CsrMatrix a = random_csr(200, 10, 0.1, seed);
    const auto s = build_countsketch(16, 200, seed);
    const DenseMatrix c = multiply_sa(s, a.view(), 4);
    const testing::MatrixXd want = to_eigen(s.densify().view()) * to_eigen(a.view());
    EXPECT_LE(rel_fro(to_eigen(c.view()), want), 1e-12);
  }
}

TEST(MultiplySa, DenseInputIsBitwiseEqualToCsr) {
  const CsrMatrix a = random_csr(300, 7, 0.2, 4);
  const auto s = build_countsketch(20, 300, 4);
  const DenseMatrix c1 = multiply_sa(s, a.view(), 3);
  for (Layout l : {Layout::RowMajor, Layout::ColMajor}) {
    const DenseMatrix c2 = multiply_sa(s, to_dense(a.view(), l).view(), 3);
    EXPECT_TRUE(c1 == c2);
  }
}

TEST(MultiplySa, RowContributionsEqualNnz) {
  const CsrMatrix a = random_csr(500, 12, 0.05, 6);
  const auto s = build_countsketch(30, 500, 6);
  KernelStats st;
  multiply_sa(s, a.view(), 4, &st);
  EXPECT_EQ(st.row_contributions, a.nnz());
  index_t sum = 0;
  for (auto w : st.block_work) sum += w;
  EXPECT_EQ(sum, a.nnz());
}

TEST(MultiplySa, NegatedSketchNegatesProduct) {
  const CsrMatrix a = random_csr(120, 6, 0.3, 7);
  const auto s = build_countsketch(10, 120, 7);
  const DenseMatrix c = multiply_sa(s, a.view());
  const DenseMatrix cn = multiply_sa(s.negated(), a.view());
  for (index_t i = 0; i < c.rows(); ++i)
    for (index_t j = 0; j < c.cols(); ++j) EXPECT_EQ(cn(i, j), -c(i, j));
}

TEST(MultiplySa, CommutesWithColumnScaling) {
  const CsrMatrix a = random_csr(150, 5, 0.3, 8);
  const std::vector<double> dscale{2.0, 0.5, -4.0, 1.0, 0.25};  // powers of two keep products exact
  std::vector<Triplet> t;
  for (index_t i = 0; i < a.rows(); ++i)
    for (index_t h = a.rowptr()[i]; h < a.rowptr()[i + 1]; ++h)
      t.push_back({i, a.colidx()[h], a.values()[h] * dscale[a.colidx()[h]]});
  const CsrMatrix ad = csr_from_triplets(a.rows(), a.cols(), t);
  const auto s = build_countsketch(12, 150, 8);
  const DenseMatrix c = multiply_sa(s, a.view());
  const DenseMatrix cd = multiply_sa(s, ad.view());
  for (index_t i = 0; i < c.rows(); ++i)
    for (index_t j = 0; j < c.cols(); ++j) EXPECT_EQ(cd(i, j), c(i, j) * dscale[j]);
}

TEST(MultiplySa, DimensionMismatch) {
  const CsrMatrix a = random_csr(10, 3, 0.5, 1);
  const auto s = build_countsketch(4, 11, 1);
  EXPECT_THROW(multiply_sa(s, a.view()), InputError);
}

TEST(MultiplySa, BitwiseAcrossThreadCounts) {
  const CsrMatrix a = random_csr(2000, 16, 0.05, 9);
  const auto ref = multiply_sa(build_countsketch(64, 2000, 9, {SketchVariant::Coo, 0, 0, 1}), a.view(), 1);
  for (int p : {2, 3, 8}) {
    for (auto variant : {SketchVariant::Coo, SketchVariant::Bccs}) {
      BuildOptions opt;
      opt.variant = variant;
      opt.threads = p;
      EXPECT_TRUE(multiply_sa(build_countsketch(64, 2000, 9, opt), a.view(), p) == ref);
    }
  }
}

SketchConfig gsa_config(index_t m, index_t r, std::uint64_t seed, index_t batch = 0) {
  SketchConfig cfg;
  cfg.m = m;
  cfg.r = r;
  cfg.seed = seed;
  cfg.batch = batch;
  return cfg;
}

TEST(MultiplyGsa, IdentityGaussianReducesToSa) {
  const CsrMatrix a = random_csr(300, 6, 0.1, 10);
  GsaOptions opt;
  opt.gaussian_override = [](index_t i, index_t j) { return i == j ? 1.0 : 0.0; };
  opt.threads = 3;
  const DenseMatrix c = multiply_gsa(a.view(), gsa_config(24, 24, 10, 5), opt);
  const DenseMatrix sa = multiply_sa(build_countsketch(24, 300, 10), a.view());
  EXPECT_TRUE(c == sa);
}

TEST(MultiplyGsa, BatchSizeDoesNotChangeResult) {
  const CsrMatrix a = random_csr(400, 8, 0.1, 11);
  const index_t r = 40;
  const DenseMatrix ref = multiply_gsa(a.view(), gsa_config(12, r, 11, 1));
  for (index_t b : {r / 2, r, index_t{7}, index_t{0}}) EXPECT_TRUE(multiply_gsa(a.view(), gsa_config(12, r, 11, b)) == ref);
}

TEST(MultiplyGsa, MatchesDenseOracle) {
  const CsrMatrix a = random_csr(500, 8, 0.2, 12);
  const auto cfg = gsa_config(16, 64, 12);
  const DenseMatrix c = multiply_gsa(a.view(), cfg);
  const auto s = build_countsketch(64, 500, 12);
  const testing::MatrixXd want = testing::countgauss_g(12, 16, 64, true) * (to_eigen(s.densify().view()) * to_eigen(a.view()));
  EXPECT_LE(rel_fro(to_eigen(c.view()), want), 1e-10);
}

TEST(MultiplyGsa, ScalingFlag) {
  const CsrMatrix a = random_csr(100, 4, 0.3, 13);
  auto cfg = gsa_config(9, 30, 13);
  const DenseMatrix scaled = multiply_gsa(a.view(), cfg);
  cfg.scale_gaussian = false;
  const DenseMatrix raw = multiply_gsa(a.view(), cfg);
  for (index_t i = 0; i < 9; ++i)
    for (index_t j = 0; j < 4; ++j) EXPECT_NEAR(scaled(i, j), raw(i, j) / 3.0, 1e-12 * (1 + std::abs(raw(i, j))));
}

TEST(MultiplyGsa, DenseAndCsrInputsAgreeBitwise) {
  const CsrMatrix a = random_csr(250, 5, 0.3, 14);
  const auto cfg = gsa_config(10, 50, 14, 9);
  const DenseMatrix c1 = multiply_gsa(a.view(), cfg);
  const DenseMatrix c2 = multiply_gsa(to_dense(a.view(), Layout::ColMajor).view(), cfg);
  EXPECT_TRUE(c1 == c2);
}

TEST(MultiplyGsa, BitwiseAcrossThreadsAndVariants) {
  const CsrMatrix a = random_csr(1500, 12, 0.05, 15);
  const auto cfg = gsa_config(24, 144, 15);
  GsaOptions one;
  one.threads = 1;
  const DenseMatrix ref = multiply_gsa(a.view(), cfg, one);
  for (int p : {2, 8}) {
    for (auto variant : {SketchVariant::Coo, SketchVariant::Bccs}) {
      GsaOptions opt;
      opt.threads = p;
      opt.variant = variant;
      EXPECT_TRUE(multiply_gsa(a.view(), cfg, opt) == ref);
    }
  }
}

TEST(MultiplyGsa, InstrumentedBudgets) {
  const CsrMatrix a = random_csr(600, 10, 0.1, 16);
  const index_t m = 20, r = 100, d = 10;
  KernelStats st;
  GsaOptions opt;
  opt.stats = &st;
  multiply_gsa(a.view(), gsa_config(m, r, 16), opt);
  EXPECT_EQ(st.randn, m * r);
  EXPECT_EQ(st.randi, 600);
  EXPECT_EQ(st.randb, 600);
  EXPECT_EQ(st.row_contributions, a.nnz());
  EXPECT_EQ(st.accumulate_flops, 2 * m * r * d);
  EXPECT_LE(st.aux_bytes, (m + d) * d * static_cast<index_t>(sizeof(double)));
}

TEST(MultiplyGsa, InvalidConfig) {
  const CsrMatrix a = random_csr(10, 3, 0.5, 1);
  EXPECT_THROW(multiply_gsa(a.view(), gsa_config(0, 4, 1)), InputError);
  EXPECT_THROW(multiply_gsa(a.view(), gsa_config(2, 0, 1)), InputError);
  EXPECT_THROW(multiply_gsa(a.view(), gsa_config(2, 4, 1, 5)), InputError);
}

TEST(CountGauss, ZeroGaussianRowsFallsBackToSa) {
  const CsrMatrix a = random_csr(80, 4, 0.3, 17);
  SketchConfig cfg;
  cfg.r = 10;
  cfg.seed = 17;
  EXPECT_TRUE(countgauss(a.view(), cfg) == multiply_sa(build_countsketch(10, 80, 17), a.view()));
}

}  // namespace
}  // namespace sketchlab
