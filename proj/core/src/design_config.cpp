#include "pslforge/design_config.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pslforge/errors.hpp"

namespace pslforge {

std::string to_string(Initializer init) {
  switch (init) {
    case Initializer::Random: return "random";
    case Initializer::Golomb: return "golomb";
    case Initializer::Cyclic: return "cyclic";
  }
  return "?";
}

Initializer initializer_from_string(const std::string& name) {
  if (name == "random") return Initializer::Random;
  if (name == "golomb") return Initializer::Golomb;
  if (name == "cyclic") return Initializer::Cyclic;
  throw InvalidInput("unknown initializer '" + name + "' (expected random, golomb or cyclic)");
}

std::vector<int> full_lag_set(int n) {
  std::vector<int> lags(static_cast<std::size_t>(std::max(n - 1, 0)));
  std::iota(lags.begin(), lags.end(), 1);
  return lags;
}

std::vector<int> DesignConfig::lags() const {
  if (lag_set.empty()) return full_lag_set(n);
  auto out = lag_set;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void DesignConfig::validate() const {
  if (n < 2) throw InvalidInput("problem.n: sequence length must be at least 2");
  if (!(w >= 0.0 && w <= 1.0)) throw InvalidInput("am.w: must lie in [0, 1]");
  if (!(eps_x > 0.0)) throw InvalidInput("am.eps_x: must be positive");
  if (!(eps_rank > 0.0)) throw InvalidInput("am.eps_rank: must be positive");
  if (phi_max < 0) throw InvalidInput("am.phi_max: must be nonnegative");
  if (init_iters < 0) throw InvalidInput("am.init_iters: must be nonnegative");
  for (int l : lag_set) {
    if (l < 1 || l > n - 1) throw InvalidInput("problem.lag_set: lag " + std::to_string(l) + " outside 1..N-1");
  }
  for (double f : mask.grid()) {
    if (!mask.in_stopband(f)) throw InvalidInput("mask: grid point outside every stop interval");
  }
  solver.validate();
}

}  // namespace pslforge
