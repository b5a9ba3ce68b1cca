#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pslforge/am.hpp"
#include "pslforge/errors.hpp"
#include "pslforge/metrics.hpp"

using namespace pslforge;

namespace {

Sequence barker13() {
  const int signs[13] = {1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1};
  Eigen::VectorXcd v(13);
  for (int i = 0; i < 13; ++i) v[i] = signs[i];
  return Sequence(v);
}

}  // namespace

TEST(Autocorrelation, AllOnes) {
  const auto r = autocorrelation(Sequence(Eigen::VectorXcd::Ones(4)));
  ASSERT_EQ(r.size(), 4);
  for (int l = 0; l < 4; ++l) EXPECT_NEAR(std::abs(r.at(l) - cplx(4.0 - l)), 0.0, 1e-12);
}

TEST(Autocorrelation, MatchesDirectSummation) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> len(8, 128);
  for (int trial = 0; trial < 100; ++trial) {
    const Sequence x = trial % 2 ? oracle::random_unimodular(len(rng), rng) : oracle::random_complex(len(rng), rng);
    const auto fast = autocorrelation(x);
    const auto slow = oracle::direct_autocorrelation(x.values());
    for (int l = 0; l < x.size(); ++l) ASSERT_LE(std::abs(fast.at(l) - slow[static_cast<std::size_t>(l)]), 1e-10);
  }
}

TEST(Autocorrelation, NegativeLagsAreConjugates) {
  std::mt19937_64 rng(3);
  const auto r = autocorrelation(oracle::random_complex(9, rng));
  for (int l = 1; l < 9; ++l) EXPECT_EQ(r.at(-l), std::conj(r.at(l)));
  EXPECT_THROW((void)r.at(9), InvalidInput);
}

TEST(Autocorrelation, ZeroLagOfUnimodularIsN) {
  std::mt19937_64 rng(5);
  const auto r = autocorrelation(oracle::random_unimodular(37, rng));
  EXPECT_NEAR(r.at(0).real(), 37.0, 1e-12);
  EXPECT_NEAR(r.at(0).imag(), 0.0, 1e-12);
}

TEST(Npsl, Barker13) {
  const Sequence b = barker13();
  EXPECT_DOUBLE_EQ(oracle::direct_psl(b.values()), 1.0);
  EXPECT_NEAR(psl(b), 1.0, 1e-12);
  EXPECT_NEAR(npsl_db(b), 20.0 * std::log10(1.0 / 13.0), 1e-10);
  EXPECT_NEAR(npsl_db(b), -22.28, 0.005);
}

TEST(Npsl, GolombLength100) {
  EXPECT_NEAR(npsl_db(init_golomb(100)), -26.32, 0.05);
}

TEST(Npsl, LastLagOnly) {
  std::mt19937_64 rng(9);
  for (int n : {4, 17, 64}) {
    const Sequence x = oracle::random_unimodular(n, rng);
    EXPECT_NEAR(npsl_db(x, {n - 1}), 20.0 * std::log10(1.0 / n), 1e-12);
  }
}

TEST(Npsl, InvariantUnderRotationAndConjugateReversal) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Sequence x = oracle::random_unimodular(24, rng);
    const Eigen::VectorXcd rotated = x.values() * std::polar(1.0, 0.3 * trial);
    const Eigen::VectorXcd reversed = x.values().reverse().conjugate();
    EXPECT_NEAR(npsl_db(Sequence(rotated)), npsl_db(x), 1e-9);
    EXPECT_NEAR(npsl_db(Sequence(reversed)), npsl_db(x), 1e-9);
  }
}

TEST(SpectralReport, MatchesDtftOracle) {
  const Sequence ones(Eigen::VectorXcd::Ones(4));
  const auto mask = SpectralMask::uniform({{0.4, 0.6}}, 0, 1.0);
  const auto rep = spectral_report(ones, mask, 500);
  double e_msb = 0.0, pass = 0.0;
  int count = 0;
  for (int k = 0; k < 500; ++k) {
    const double f = k / 500.0;
    const double e = std::norm(oracle::direct_dtft(ones.values(), f));
    EXPECT_NEAR(rep.energy[static_cast<std::size_t>(k)], e, 1e-12);
    if (f >= 0.4 && f <= 0.6) {
      e_msb = std::max(e_msb, e);
    } else {
      pass += e;
      ++count;
    }
  }
  EXPECT_NEAR(rep.e_msb, e_msb, 1e-12);
  EXPECT_NEAR(rep.e_apb, pass / count, 1e-12);
  EXPECT_DOUBLE_EQ(rep.a_stop_db, 10.0 * std::log10(rep.e_apb / rep.e_msb));
}

TEST(SpectralReport, NormalizedPassbandMeanIsOne) {
  std::mt19937_64 rng(4);
  const auto mask = SpectralMask::uniform({{0.2, 0.3}, {0.7, 0.75}}, 0, 1.0);
  const auto rep = spectral_report(oracle::random_unimodular(50, rng), mask);
  double sum = 0.0;
  int count = 0;
  for (std::size_t k = 0; k < rep.freqs.size(); ++k) {
    if (!mask.in_stopband(rep.freqs[k])) {
      sum += rep.normalized_energy[k];
      ++count;
    }
  }
  EXPECT_NEAR(sum / count, 1.0, 1e-12);
}

TEST(SpectralReport, RejectsFullStopband) {
  const auto mask = SpectralMask::uniform({{0.0, 1.0}}, 0, 1.0);
  EXPECT_THROW(spectral_report(Sequence(Eigen::VectorXcd::Ones(4)), mask), InvalidInput);
  EXPECT_THROW(spectral_report(Sequence(Eigen::VectorXcd::Ones(4)), SpectralMask::none(), 1), InvalidInput);
}

TEST(ChooseUmax, Examples) {
  EXPECT_NEAR(choose_umax(30.0, 32, UmaxMode::Guarantee), 0.032, 1e-15);
  EXPECT_NEAR(choose_umax(50.0, 100, UmaxMode::Guarantee), 0.001, 1e-15);
  EXPECT_DOUBLE_EQ(choose_umax(0.0, 77, UmaxMode::Guarantee), 77.0);
  EXPECT_NEAR(choose_umax(30.0, 32, UmaxMode::Approximate, 0.9), 0.032 / 0.9, 1e-15);
  EXPECT_THROW(choose_umax(30.0, 32, UmaxMode::Approximate), InvalidInput);
  EXPECT_THROW(choose_umax(-1.0, 32, UmaxMode::Guarantee), InvalidInput);
}

TEST(ChooseUmax, GuaranteeHoldsOnDenseGrid) {
  // Cap every stopband sample, pick A from the cap, then A_stop >= A up to sampling slack.
  const int n = 32;
  DesignConfig cfg;
  cfg.n = n;
  cfg.mask = SpectralMask::uniform({{0.2, 0.3}}, 0, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Sequence x = init_cyclic_stopband(cfg, 300, seed);
    const auto rep = spectral_report(x, cfg.mask);
    const double cap = rep.e_msb;
    ASSERT_LT(cap, n);
    const double a_db = 10.0 * std::log10(n / cap);
    EXPECT_NEAR(choose_umax(a_db, n, UmaxMode::Guarantee), cap, 1e-12 * n);
    EXPECT_GE(rep.a_stop_db, a_db - 0.2);
  }
}

TEST(Ambiguity, MatchesDoubleSum) {
  std::mt19937_64 rng(13);
  const Sequence x = oracle::random_complex(40, rng);
  EXPECT_LE(std::abs(ambiguity_function(x, 3, 5, 64) - oracle::direct_ambiguity(x.values(), 3, 5, 64)), 1e-10);
  EXPECT_LE(std::abs(ambiguity_function(x, -3, 5, 64) - std::conj(oracle::direct_ambiguity(x.values(), 3, 5, 64))),
            1e-10);
}

TEST(Ambiguity, ZeroDopplerCutIsAutocorrelation) {
  std::mt19937_64 rng(17);
  const Sequence x = oracle::random_unimodular(30, rng);
  const auto r = autocorrelation(x);
  for (int l = -29; l <= 29; ++l) EXPECT_LE(std::abs(ambiguity_function(x, l, 0, 16) - r.at(l)), 1e-12);
  EXPECT_NEAR(std::abs(ambiguity_function(x, 0, 0, 16) - cplx(30.0)), 0.0, 1e-12);
  EXPECT_THROW(ambiguity_function(x, 30, 0, 16), InvalidInput);
  EXPECT_THROW(ambiguity_function(x, 1, 16, 16), InvalidInput);
}
