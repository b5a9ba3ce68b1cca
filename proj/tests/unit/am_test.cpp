#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pslforge/am.hpp"
#include "pslforge/bound.hpp"
#include "pslforge/errors.hpp"
#include "pslforge/metrics.hpp"

using namespace pslforge;

TEST(Initializers, GolombPhases) {
  const Sequence g = init_golomb(10);
  for (int k = 0; k < 10; ++k) {
    EXPECT_LE(std::abs(g[k] - std::polar(1.0, std::numbers::pi * k * (k + 1.0) / 10)), 1e-15);
  }
}

TEST(Initializers, RandomIsSeeded) {
  EXPECT_EQ(init_random(16, 5), init_random(16, 5));
  EXPECT_FALSE(init_random(16, 5) == init_random(16, 6));
  EXPECT_TRUE(init_random(16, 5).is_unimodular());
}

TEST(Initializers, CyclicSuppressesStopband) {
  DesignConfig cfg;
  cfg.n = 32;
  cfg.mask = SpectralMask::uniform({{0.2, 0.3}}, 30, 0.032);
  double before = 0.0, after = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    before += max_grid_energy(init_random(32, seed), cfg.mask);
    const Sequence x = init_cyclic_stopband(cfg, 200, seed);
    EXPECT_TRUE(x.is_unimodular());
    after += max_grid_energy(x, cfg.mask);
  }
  EXPECT_LT(after, 0.1 * before);
  EXPECT_EQ(init_cyclic_stopband(cfg, 0, 3), init_random(32, 3));
}

TEST(RankOne, ExtractsAlignedVector) {
  std::mt19937_64 rng(51);
  const Sequence x = oracle::random_unimodular(7, rng);
  const RankOneExtraction ex = extract_rank_one(HermitianMatrix::outer(3.0 * x.values()), 1e-8);
  EXPECT_TRUE(ex.success);
  EXPECT_NEAR(ex.sigma0, 9.0 * 7, 1e-10);
  EXPECT_LE(ex.ratio(), 1e-12);
  EXPECT_NEAR(ex.x[0].imag(), 0.0, 1e-12);
  EXPECT_GT(ex.x[0].real(), 0.0);
  EXPECT_LE((ex.x * ex.x.adjoint() - 9.0 * x.values() * x.values().adjoint()).norm(), 1e-9);
}

TEST(RankOne, FlagsHigherRankAndRejectsIndefinite) {
  std::mt19937_64 rng(52);
  const HermitianMatrix two = HermitianMatrix::from_upper(oracle::random_psd(6, 2, rng));
  EXPECT_FALSE(extract_rank_one(two, 1e-8).success);
  HermitianMatrix indefinite = HermitianMatrix::identity(3);
  indefinite.set(2, 2, -1.0);
  EXPECT_THROW(extract_rank_one(indefinite, 1e-8), InvalidInput);
  EXPECT_THROW(extract_rank_one(HermitianMatrix(3), 1e-8), DegenerateInput);
}

TEST(AlternatingMinimization, ZeroIterationsHitsCap) {
  DesignConfig cfg;
  cfg.n = 8;
  cfg.phi_max = 0;
  const Sequence x0 = init_golomb(8);
  const DesignResult res = run_am(cfg, x0);
  EXPECT_EQ(res.status, DesignStatus::IterCap);
  EXPECT_TRUE(res.trace.empty());
  ASSERT_TRUE(res.sequence.has_value());
  EXPECT_LE((res.sequence->values() - x0.values()).norm(), 1e-12);
}

TEST(AlternatingMinimization, SmallCaseConvergesToFeasibleSequence) {
  DesignConfig cfg;
  cfg.n = 12;
  cfg.mask = SpectralMask::uniform({{0.2, 0.3}}, 8, choose_umax(20.0, 12, UmaxMode::Guarantee));
  cfg.w = 0.5;
  cfg.eps_x = 5e-3;
  std::vector<double> gaps;
  const DesignResult res = run_am(cfg, initial_sequence(cfg), [&](const AmState&, const AmIteration& it) { gaps.push_back(it.gap); });
  ASSERT_EQ(res.status, DesignStatus::Converged);
  ASSERT_TRUE(res.sequence.has_value());
  EXPECT_EQ(gaps.size(), res.trace.size());
  EXPECT_LE(res.trace.back().gap, cfg.eps_x);
  EXPECT_LE(res.post_projection.max_modulus_error, 1e-12);
  EXPECT_LE(res.post_projection.max_grid_violation, 1.01);
  EXPECT_LE(res.sigma_ratio, cfg.eps_rank);
  EXPECT_LE(compute_lower_bound(cfg).t_lb, psl(*res.sequence) + 1e-9);
}

TEST(AlternatingMinimization, RejectsBadStart) {
  DesignConfig cfg;
  cfg.n = 8;
  EXPECT_THROW(run_am(cfg, init_golomb(9)), InvalidInput);
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(8);
  v[0] = 2.0;
  EXPECT_THROW(run_am(cfg, Sequence(v)), InvalidInput);
  cfg.w = 2.0;
  EXPECT_THROW(run_am(cfg, init_golomb(8)), InvalidInput);
}
