#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "pslforge/sequence.hpp"

namespace oracle {

using pslforge::cplx;

inline pslforge::Sequence random_unimodular(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> p(static_cast<std::size_t>(n));
  for (auto& v : p) v = phase(rng);
  return pslforge::sequence_from_phases(p);
}

inline pslforge::Sequence random_complex(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = cplx(g(rng), g(rng));
  return pslforge::Sequence(v);
}

// r_l = sum_{k=l}^{N-1} x_k conj(x_{k-l}) by direct summation.
inline std::vector<cplx> direct_autocorrelation(const Eigen::VectorXcd& x) {
  const auto n = static_cast<int>(x.size());
  std::vector<cplx> r(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    cplx acc = 0.0;
    for (int k = l; k < n; ++k) acc += x[k] * std::conj(x[k - l]);
    r[static_cast<std::size_t>(l)] = acc;
  }
  return r;
}

inline double direct_psl(const Eigen::VectorXcd& x) {
  const auto r = direct_autocorrelation(x);
  double best = 0.0;
  for (std::size_t l = 1; l < r.size(); ++l) best = std::max(best, std::abs(r[l]));
  return best;
}

// X(f) = sum_n x_n exp(-j 2 pi f n).
inline cplx direct_dtft(const Eigen::VectorXcd& x, double f) {
  cplx acc = 0.0;
  for (Eigen::Index n = 0; n < x.size(); ++n) acc += x[n] * std::polar(1.0, -2.0 * std::numbers::pi * f * n);
  return acc;
}

// chi(l, p) for l >= 0 by the double sum.
inline cplx direct_ambiguity(const Eigen::VectorXcd& x, int lag, int p, int bins) {
  cplx acc = 0.0;
  for (Eigen::Index n = lag; n < x.size(); ++n) {
    acc += x[n] * std::conj(x[n - lag]) * std::polar(1.0, 2.0 * std::numbers::pi * p / bins * n);
  }
  return acc;
}

// Random Hermitian PSD matrix G G^H with G n x rank.
inline Eigen::MatrixXcd random_psd(int n, int rank, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd f(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) f(i, j) = cplx(g(rng), g(rng));
  return f * f.adjoint();
}

}  // namespace oracle
