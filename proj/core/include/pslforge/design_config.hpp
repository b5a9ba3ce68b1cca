#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pslforge/conic.hpp"
#include "pslforge/spectral_mask.hpp"

namespace pslforge {

enum class Initializer { Random, Golomb, Cyclic };

std::string to_string(Initializer init);
Initializer initializer_from_string(const std::string& name);

/// Everything the alternating-minimization design and the lower bound need.
struct DesignConfig {
  int n = 32;
  SpectralMask mask;
  double w = 0.11;           // penalty weight in [0, 1]
  double eps_x = 2e-3;       // stop when 1 - tr(X1 X2) / N^2 <= eps_x
  double eps_rank = 1e-8;    // accept extraction when sigma1 / sigma0 <= eps_rank
  int phi_max = 50;
  std::vector<int> lag_set;  // empty means every lag 1..N-1
  conic::SolverSettings solver;
  std::uint64_t seed = 0;
  Initializer initializer = Initializer::Cyclic;
  int init_iters = 200;      // passes of the cyclic stopband initializer

  /// Lags actually constrained, sorted ascending.
  [[nodiscard]] std::vector<int> lags() const;

  /// Throws InvalidInput naming the offending field.
  void validate() const;
};

/// Full lag set {1, ..., n - 1}.
std::vector<int> full_lag_set(int n);

}  // namespace pslforge
