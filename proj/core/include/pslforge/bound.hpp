#pragma once

#include <vector>

#include "pslforge/conic.hpp"
#include "pslforge/design_config.hpp"
#include "pslforge/numkern.hpp"
#include "pslforge/sequence.hpp"

namespace pslforge {

/// Certified lower bound on the PSL of any unimodular sequence that meets the
/// grid spectral caps, with the dual multipliers that certify it.
struct BoundResult {
  int n = 0;
  double t_lb = 0.0;        // amplitude units
  double npsl_lb_db = 0.0;  // 20 log10(t_lb / N); -inf when t_lb = 0
  std::vector<int> lags;
  std::vector<cplx> y;      // one per constrained lag
  std::vector<double> mu;   // one per grid frequency
  std::vector<double> nu;   // one per sequence index
  double min_eigenvalue = 0.0;  // of M(y, mu, nu)
  double y_l1 = 0.0;
  double solver_objective = 0.0;  // before certificate repair
  conic::SolveStatus solver_status = conic::SolveStatus::MaxIterations;
  int solver_iterations = 0;
  double seconds = 0.0;

  /// PSL is at least 1 for unimodular sequences, so only t_lb > 1 says anything new.
  [[nodiscard]] bool informative() const { return t_lb > 1.0; }
};

/// Solves the dual program and turns its multipliers into a valid certificate.
/// Throws NumericFailure when the solver does not reach an optimal status.
BoundResult compute_lower_bound(const DesignConfig& cfg);

struct CertificateReport {
  double min_eigenvalue = 0.0;
  double y_l1 = 0.0;
  double min_mu = 0.0;
  double objective = 0.0;       // -sum U_i mu_i - sum nu_n
  double objective_error = 0.0; // |objective - t_lb| (0 when both clip to the trivial bound)
  bool psd_ok = false;
  bool l1_ok = false;
  bool mu_ok = false;
  bool objective_ok = false;
  [[nodiscard]] bool valid() const { return psd_ok && l1_ok && mu_ok && objective_ok; }
};

/// Rebuilds M(y, mu, nu) from the constraint atoms and re-checks every
/// certificate condition. Never throws on a bad certificate.
CertificateReport verify_certificate(const BoundResult& b, const DesignConfig& cfg);

/// L(t, x, lambda, mu, nu) = t + sum lambda_l (|x^H N^l x| - t) + sum mu_i (x^H F_i x - U_i)
///                          + sum nu_n (|x_n|^2 - 1).
double lagrangian(double t, const Eigen::VectorXcd& x, const std::vector<double>& lambda,
                  const std::vector<double>& mu, const std::vector<double>& nu, const DesignConfig& cfg);

/// Same as lagrangian() with |x^H N^l x| replaced by Re(exp(-j theta_l) x^H N^l x).
double modified_lagrangian(double t, const Eigen::VectorXcd& x, const std::vector<double>& theta,
                           const std::vector<double>& lambda, const std::vector<double>& mu,
                           const std::vector<double>& nu, const DesignConfig& cfg);

/// 20 log10(1 / N): the bound implied by |r_{N-1}| = 1.
double trivial_npsl_bound_db(int n);

}  // namespace pslforge
