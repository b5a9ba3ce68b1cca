#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pslforge/am.hpp"
#include "pslforge/assembly.hpp"
#include "pslforge/bound.hpp"
#include "pslforge/errors.hpp"
#include "pslforge/metrics.hpp"

using namespace pslforge;

namespace {

DesignConfig small_config(int n, int grid) {
  DesignConfig cfg;
  cfg.n = n;
  cfg.mask = grid > 0 ? SpectralMask::uniform({{0.2, 0.3}}, grid, 0.05 * n) : SpectralMask::uniform({{0.2, 0.3}}, 0, 1.0);
  return cfg;
}

}  // namespace

TEST(TrivialBound, PublishedColumn) {
  EXPECT_NEAR(trivial_npsl_bound_db(32), -30.10, 0.005);
  EXPECT_NEAR(trivial_npsl_bound_db(100), -40.00, 0.005);
  EXPECT_NEAR(trivial_npsl_bound_db(128), -42.14, 0.005);
  EXPECT_NEAR(trivial_npsl_bound_db(256), -48.16, 0.005);
  EXPECT_THROW(trivial_npsl_bound_db(1), InvalidInput);
}

// The modified Lagrangian never exceeds the Lagrangian and matches it at theta_l = arg(x^H N^l x).
TEST(Lagrangian, ModifiedIsUnderApproximation) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::uniform_real_distribution<double> angle(-3.2, 3.2);
  const DesignConfig cfg = small_config(6, 3);
  const auto atoms = build_atoms(cfg);
  const std::size_t nl = atoms.lags.size();
  for (int trial = 0; trial < 10000; ++trial) {
    const Eigen::VectorXcd x = trial % 2 ? oracle::random_unimodular(6, rng).values() : oracle::random_complex(6, rng).values();
    std::vector<double> lambda(nl), theta(nl), mu(3), nu(6);
    for (auto& v : lambda) v = u(rng);
    for (auto& v : theta) v = angle(rng);
    for (auto& v : mu) v = u(rng);
    for (auto& v : nu) v = g(rng);
    const double t = g(rng);
    const double full = lagrangian(t, x, lambda, mu, nu, cfg);
    ASSERT_GE(full, modified_lagrangian(t, x, theta, lambda, mu, nu, cfg) - 1e-9);
    std::vector<double> aligned(nl);
    for (std::size_t k = 0; k < nl; ++k) aligned[k] = std::arg((x.adjoint() * atoms.shifts[k].cast<cplx>() * x).value());
    ASSERT_NEAR(full, modified_lagrangian(t, x, aligned, lambda, mu, nu, cfg), 1e-9);
  }
}

TEST(Lagrangian, MatchesDirectFormula) {
  std::mt19937_64 rng(42);
  const DesignConfig cfg = small_config(5, 2);
  const auto atoms = build_atoms(cfg);
  const Eigen::VectorXcd x = oracle::random_complex(5, rng).values();
  const std::vector<double> lambda{0.1, 0.2, 0.3, 0.4}, mu{0.5, 0.6}, nu{1, 2, 3, 4, 5};
  const double t = 0.7;
  const auto r = oracle::direct_autocorrelation(x);
  double expect = t;
  for (int l = 1; l < 5; ++l) expect += lambda[static_cast<std::size_t>(l - 1)] * (std::abs(r[static_cast<std::size_t>(l)]) - t);
  for (std::size_t i = 0; i < 2; ++i) expect += mu[i] * (std::norm(oracle::direct_dtft(x, atoms.freqs[i])) - atoms.caps[i]);
  for (int n = 0; n < 5; ++n) expect += nu[static_cast<std::size_t>(n)] * (std::norm(x[n]) - 1.0);
  EXPECT_NEAR(lagrangian(t, x, lambda, mu, nu, cfg), expect, 1e-10);
}

TEST(LowerBound, WeakDualityWithoutMask) {
  const DesignConfig cfg = small_config(16, 0);
  const BoundResult b = compute_lower_bound(cfg);
  EXPECT_TRUE(verify_certificate(b, cfg).valid());
  EXPECT_EQ(b.informative(), b.t_lb > 1.0);
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) EXPECT_LE(b.t_lb, psl(oracle::random_unimodular(16, rng)) + 1e-9);
  EXPECT_LE(b.t_lb, psl(init_golomb(16)) + 1e-9);
}

TEST(LowerBound, CertificateChecksDetectTampering) {
  const DesignConfig cfg = small_config(10, 5);
  BoundResult b = compute_lower_bound(cfg);
  const CertificateReport ok = verify_certificate(b, cfg);
  EXPECT_TRUE(ok.valid());
  EXPECT_GE(ok.min_eigenvalue, -1e-9);
  EXPECT_NEAR(b.y_l1, 1.0, 1e-4);
  b.mu[0] = -1.0;
  EXPECT_FALSE(verify_certificate(b, cfg).mu_ok);
  BoundResult c = compute_lower_bound(cfg);
  c.t_lb += 1.0;
  EXPECT_FALSE(verify_certificate(c, cfg).objective_ok);
}

TEST(LowerBound, NpslMatchesAmplitude) {
  const DesignConfig cfg = small_config(12, 6);
  const BoundResult b = compute_lower_bound(cfg);
  EXPECT_EQ(b.n, 12);
  EXPECT_NEAR(b.npsl_lb_db, 20.0 * std::log10(b.t_lb / 12.0), 1e-12);
  EXPECT_EQ(b.lags.size(), 11u);
  EXPECT_EQ(b.mu.size(), 6u);
  EXPECT_EQ(b.nu.size(), 12u);
}
