#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pslforge/errors.hpp"
#include "pslforge/numkern.hpp"

using namespace pslforge;

TEST(HermitianMatrix, StorageAndMirror) {
  HermitianMatrix h(3);
  h.set(0, 2, cplx(1, 2));
  h.set(1, 1, cplx(4, 9));
  EXPECT_EQ(h(2, 0), cplx(1, -2));
  EXPECT_EQ(h(1, 1), cplx(4, 0));
  const Eigen::MatrixXcd d = h.dense();
  EXPECT_LE((d - d.adjoint()).norm(), 0.0);
  EXPECT_DOUBLE_EQ(h.trace(), 4.0);
}

TEST(HermitianMatrix, FactoriesAgreeWithDense) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXcd a = oracle::random_psd(5, 2, rng);
  EXPECT_LE((HermitianMatrix::from_upper(a).dense() - a).norm(), 1e-12);
  const Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(4, 4);
  EXPECT_LE((HermitianMatrix::hermitian_part(m).dense() - 0.5 * (m + m.adjoint())).norm(), 1e-12);
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(4);
  EXPECT_LE((HermitianMatrix::outer(v).dense() - v * v.adjoint()).norm(), 1e-12);
  EXPECT_LE((HermitianMatrix::identity(3).dense() - Eigen::MatrixXcd::Identity(3, 3)).norm(), 0.0);
}

TEST(Eigh, DescendingAndReconstructs) {
  std::mt19937_64 rng(2);
  const HermitianMatrix h = HermitianMatrix::hermitian_part(oracle::random_psd(6, 6, rng) - 3.0 * Eigen::MatrixXcd::Identity(6, 6));
  const auto ed = eigh(h);
  for (int i = 1; i < 6; ++i) EXPECT_GE(ed.values[i - 1], ed.values[i]);
  const Eigen::MatrixXcd back = ed.vectors * ed.values.cast<cplx>().asDiagonal() * ed.vectors.adjoint();
  EXPECT_LE((back - h.dense()).norm(), 1e-10);
}

TEST(ProjectPsd, ClipsNegativeEigenvalues) {
  HermitianMatrix h(2);
  h.set(0, 0, 1.0);
  h.set(1, 1, -2.0);
  const HermitianMatrix p = project_psd(h);
  EXPECT_NEAR(p(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR(p(1, 1).real(), 0.0, 1e-14);
  const auto [s0, s1] = top_two_singular_values(p);
  EXPECT_NEAR(s0, 1.0, 1e-14);
  EXPECT_NEAR(s1, 0.0, 1e-14);
}

TEST(RealEmbed, PreservesSpectrumAndInverts) {
  std::mt19937_64 rng(3);
  const HermitianMatrix h = HermitianMatrix::from_upper(oracle::random_psd(4, 2, rng));
  const Eigen::MatrixXd z = real_embed(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(z);
  const auto ed = eigh(h);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(es.eigenvalues()[7 - 2 * i], ed.values[i], 1e-10);
    EXPECT_NEAR(es.eigenvalues()[6 - 2 * i], ed.values[i], 1e-10);
  }
  EXPECT_LE((real_unembed(z).dense() - h.dense()).norm(), 1e-14);
}

TEST(TraceProduct, MatchesDense) {
  std::mt19937_64 rng(4);
  const HermitianMatrix a = HermitianMatrix::from_upper(oracle::random_psd(5, 3, rng));
  const HermitianMatrix b = HermitianMatrix::from_upper(oracle::random_psd(5, 2, rng));
  EXPECT_NEAR(trace_product(a, b), (a.dense() * b.dense()).trace().real(), 1e-10);
}

// tr(AB) <= tr(A) tr(B) for PSD A, B, with equality for aligned rank-one pairs.
TEST(TraceInequality, RandomPsdPairs) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(2, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = dim(rng);
    std::uniform_int_distribution<int> rank(1, n);
    const HermitianMatrix a = HermitianMatrix::from_upper(oracle::random_psd(n, rank(rng), rng));
    const HermitianMatrix b = HermitianMatrix::from_upper(oracle::random_psd(n, rank(rng), rng));
    ASSERT_LE(trace_product(a, b), a.trace() * b.trace() + 1e-9);
  }
}

TEST(TraceInequality, AlignedRankOneEquality) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> scale(0.1, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Sequence x = oracle::random_unimodular(2 + trial % 20, rng);
    const HermitianMatrix xx = HermitianMatrix::outer(x.values());
    const double s1 = scale(rng), s2 = scale(rng);
    const HermitianMatrix a = HermitianMatrix::outer(std::sqrt(s1) * x.values());
    const HermitianMatrix b = HermitianMatrix::outer(std::sqrt(s2) * x.values());
    const double lhs = trace_product(a, b), rhs = a.trace() * b.trace();
    ASSERT_LE(std::abs(lhs - rhs), 1e-9 * std::max(1.0, rhs));
    ASSERT_NEAR(trace_product(xx, xx), xx.trace() * xx.trace(), 1e-9);
  }
}

TEST(Dtft, MatchesOracle) {
  std::mt19937_64 rng(8);
  const Sequence x = oracle::random_complex(19, rng);
  for (double f : {0.0, 0.1, 0.25, 0.731, 1.0}) EXPECT_LE(std::abs(dtft_at(x, f) - oracle::direct_dtft(x.values(), f)), 1e-12);
}
