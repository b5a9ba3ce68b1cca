#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pslforge/design_config.hpp"
#include "pslforge/numkern.hpp"
#include "pslforge/sequence.hpp"

namespace pslforge {

/// Uniform i.i.d. phases on [0, 2 pi), reproducible for a given seed.
Sequence init_random(int n, std::uint64_t seed);
/// Golomb polyphase sequence, theta_n = pi n (n + 1) / N.
Sequence init_golomb(int n);
/// Random start refined by `iters` passes of: 10N-point DFT, zero the
/// stopband bins, inverse DFT, unimodular projection.
Sequence init_cyclic_stopband(const DesignConfig& cfg, int iters, std::uint64_t seed);
/// Starting sequence selected by cfg.initializer.
Sequence initial_sequence(const DesignConfig& cfg);

struct AmState {
  int phi = 0;
  HermitianMatrix x1;
  HermitianMatrix x2;
  double t = 0.0;
  double gap = 1.0;  // 1 - tr(X1 X2) / N^2
};

struct AmIteration {
  double t = 0.0;
  double gap = 0.0;
  int solver_iterations_1 = 0;
  int solver_iterations_2 = 0;
  double seconds = 0.0;
};

enum class DesignStatus { Converged, RankFailure, IterCap };
std::string to_string(DesignStatus status);

/// Modulus and spectral-cap violations of a candidate sequence.
struct ConstraintReport {
  double max_modulus_error = 0.0;      // max | |x_n| - 1 |
  double max_grid_violation = 0.0;     // max_i |X(f_i)|^2 / U_i (0 without a mask)
};

struct RankOneExtraction {
  Eigen::VectorXcd x;  // sqrt(sigma0) u0 with x_0 real and nonnegative
  double sigma0 = 0.0;
  double sigma1 = 0.0;
  bool success = false;
  [[nodiscard]] double ratio() const { return sigma1 / sigma0; }
};

/// Top eigenpair of a PSD Hermitian matrix. Throws DegenerateInput if sigma0 = 0.
RankOneExtraction extract_rank_one(const HermitianMatrix& x, double eps_rank);

struct DesignResult {
  DesignStatus status = DesignStatus::IterCap;
  std::optional<Sequence> sequence;  // unimodular, set when converged
  std::optional<Sequence> raw;       // extracted vector before the final projection
  AmState state;
  std::vector<AmIteration> trace;
  double sigma_ratio = 1.0;
  ConstraintReport pre_projection;
  ConstraintReport post_projection;
  double seconds = 0.0;
};

using AmObserver = std::function<void(const AmState&, const AmIteration&)>;

/// Alternating minimization from X2 = x_init x_init^H. Throws NumericFailure
/// when a subproblem solve fails to converge.
DesignResult run_am(const DesignConfig& cfg, const Sequence& x_init, const AmObserver& observer = {});

ConstraintReport constraint_report(const Sequence& x, const DesignConfig& cfg);

}  // namespace pslforge
