#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pslforge/conic.hpp"
#include "pslforge/design_config.hpp"
#include "pslforge/numkern.hpp"

namespace pslforge {

/// Constant matrices of the lifted problem for one configuration.
struct ConstraintAtoms {
  int n = 0;
  std::vector<int> lags;               // constrained lags, ascending
  std::vector<double> freqs;           // mask grid f_i
  std::vector<double> caps;            // U_max,i
  std::vector<Eigen::MatrixXd> shifts;  // N_N^l for l in `lags` (entries 0/1)
  std::vector<HermitianMatrix> fourier;  // F(f_i) = f(f_i) f(f_i)^H

  /// E_n: single unit entry at (n, n).
  [[nodiscard]] HermitianMatrix basis_projector(int index) const;
};

/// N x N upper shift matrix raised to the power `lag` (ones on the lag-th superdiagonal).
Eigen::MatrixXd shift_power(int n, int lag);
/// F(f) with entries exp(j 2 pi f (m - k)).
HermitianMatrix fourier_outer(int n, double f);

ConstraintAtoms build_atoms(const DesignConfig& cfg);

/// Coordinates of an n x n Hermitian matrix as n^2 reals: the diagonal first,
/// then (Re, Im) of each strictly-upper entry in row-major order.
class HermitianCoordinates {
 public:
  explicit HermitianCoordinates(int n) : n_(n) {}

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int size() const { return n_ * n_; }
  [[nodiscard]] int diag(int i) const { return i; }
  [[nodiscard]] int re(int i, int j) const { return n_ + 2 * pair_index(i, j); }
  [[nodiscard]] int im(int i, int j) const { return n_ + 2 * pair_index(i, j) + 1; }

  /// g such that g . pack(X) = tr(G X) for every Hermitian X.
  [[nodiscard]] Eigen::VectorXd trace_functional(const HermitianMatrix& g) const;
  [[nodiscard]] Eigen::VectorXd pack(const HermitianMatrix& x) const;
  [[nodiscard]] HermitianMatrix unpack(const Eigen::Ref<const Eigen::VectorXd>& z) const;

 private:
  [[nodiscard]] int pair_index(int i, int j) const { return i * n_ - i * (i + 1) / 2 + (j - i - 1); }
  int n_;
};

/// Index of entry (row, col), row >= col, inside svec of an order-d symmetric matrix.
int svec_index(int row, int col, int order);

/// Hermitian entry (i, j), i <= j, of value `value` expressed in the svec of
/// the real embedding: (svec index, coefficient) pairs.
std::vector<std::pair<int, double>> embedded_entry(int n, int i, int j, cplx value);

/// Recovers the Hermitian matrix held in a real-embedded PSD slack block.
HermitianMatrix decode_embedded_block(const Eigen::Ref<const Eigen::VectorXd>& svec_block, int n);

/// Each AM step is compiled as the Lagrange dual of its SDP, with the
/// multipliers as variables:
///   nu (N) for diag X = 1, lambda (L) for the lag rows, mu (N_f) for the mask
///   rows and, for the X1 step, eta (3) for the penalty epigraph, scaled by
///   w N^4. Blocks: zero (sum lambda = 1 - w; X1 step also eta_0 + eta_2 = 1),
///   nonneg (lambda, mu), soc(3) (eta, X1 step only) and psd(2N) holding the
///   real embedding of the dual slack Z. The step matrix is recovered from the
///   conic dual of the psd block.
struct SubproblemLayout {
  int n = 0;
  int num_lags = 0;
  int num_freqs = 0;
  int nu = 0, lam = 0, mu = 0;
  int eta = -1;  // -1 when absent
  double penalty_weight = 0.0;
  int psd_row = 0;
};

struct AssembledSubproblem {
  conic::ConicProgram program;
  SubproblemLayout layout;
  HermitianMatrix fixed;  // the matrix held constant in this step
  bool fixed_is_x2 = true;
};

/// X1 step: minimize (1 - w) t + w [N^2 - tr(X1 X2)]^2 over X1 with X2 fixed.
AssembledSubproblem assemble_subproblem_1(const HermitianMatrix& x2, const DesignConfig& cfg,
                                          const ConstraintAtoms& atoms);
/// X2 step: minimize (1 - w) t - w tr(X1 X2) over X2 with X1 fixed.
AssembledSubproblem assemble_subproblem_2(const HermitianMatrix& x1, const DesignConfig& cfg,
                                          const ConstraintAtoms& atoms);

/// Step matrix read from the conic dual of the psd block (PSD up to solver accuracy).
HermitianMatrix subproblem_matrix(const AssembledSubproblem& sub, const conic::ConicSolution& sol);
/// tr(G_l X) for the lag-l constraint of this step.
double lag_value(const AssembledSubproblem& sub, const HermitianMatrix& x, int lag);
/// Epigraph value t = max over constrained lags of lag_value.
double subproblem_t(const AssembledSubproblem& sub, const HermitianMatrix& x, const ConstraintAtoms& atoms);

/// Lower-bound program, stated as a minimization of sum U_i mu_i + sum nu_n.
/// Variable layout: Re y (L), Im y (L), mu (N_f), nu (N), s (L) with L = |lags|.
struct BoundLayout {
  int n = 0;
  int num_lags = 0;
  int num_freqs = 0;
  int yre = 0, yim = 0, mu = 0, nu = 0, s = 0;
};

struct AssembledBound {
  conic::ConicProgram program;
  BoundLayout layout;
};

AssembledBound assemble_bound_program(const DesignConfig& cfg, const ConstraintAtoms& atoms);

/// M(y, mu, nu) = sum_l (conj(y_l) N^l + y_l (N^l)^T) / 2 + sum_i mu_i F(f_i) + sum_n nu_n E_n.
HermitianMatrix certificate_matrix(const ConstraintAtoms& atoms, const std::vector<cplx>& y,
                                   const std::vector<double>& mu, const std::vector<double>& nu);

}  // namespace pslforge
