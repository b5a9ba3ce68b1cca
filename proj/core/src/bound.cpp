#include "pslforge/bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "pslforge/assembly.hpp"
#include "pslforge/errors.hpp"

namespace pslforge {

namespace {

constexpr double kEigTol = 1e-6;
constexpr double kL1Tol = 1e-6;
constexpr double kMuTol = 1e-9;
constexpr double kObjectiveTol = 1e-8;

double certificate_objective(const std::vector<double>& caps, const std::vector<double>& mu,
                             const std::vector<double>& nu) {
  double v = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) v -= caps[i] * mu[i];
  for (double x : nu) v -= x;
  return v;
}

double l1_norm(const std::vector<cplx>& y) {
  double s = 0.0;
  for (const auto& v : y) s += std::abs(v);
  return s;
}

double min_eigenvalue(const HermitianMatrix& m) {
  const auto ed = eigh(m);
  return ed.values[ed.values.size() - 1];
}

// x^H N^l x = sum_i conj(x_i) x_{i+l}
cplx shifted_form(const Eigen::VectorXcd& x, int lag) {
  const auto n = x.size();
  return x.head(n - lag).dot(x.tail(n - lag));
}

double common_terms(double t, const Eigen::VectorXcd& x, const std::vector<double>& lambda,
                    const std::vector<double>& mu, const std::vector<double>& nu, const DesignConfig& cfg) {
  if (x.size() != cfg.n) throw InvalidInput("lagrangian: x has the wrong length");
  if (lambda.size() != cfg.lags().size()) throw InvalidInput("lagrangian: one lambda per constrained lag");
  if (mu.size() != static_cast<std::size_t>(cfg.mask.grid_size())) throw InvalidInput("lagrangian: one mu per grid frequency");
  if (nu.size() != static_cast<std::size_t>(cfg.n)) throw InvalidInput("lagrangian: one nu per sequence index");
  double v = t;
  for (double l : lambda) v -= l * t;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    v += mu[i] * (std::norm(dtft_at(Sequence(x), cfg.mask.grid()[i])) - cfg.mask.caps()[i]);
  }
  for (int k = 0; k < cfg.n; ++k) v += nu[static_cast<std::size_t>(k)] * (std::norm(x[k]) - 1.0);
  return v;
}

}  // namespace

BoundResult compute_lower_bound(const DesignConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const ConstraintAtoms atoms = build_atoms(cfg);
  const AssembledBound ab = assemble_bound_program(cfg, atoms);
  const conic::ConicSolution sol = conic::solve(ab.program, cfg.solver);
  if (sol.status != conic::SolveStatus::Optimal) {
    std::ostringstream os;
    os << "lower bound: solver ended with status " << conic::to_string(sol.status) << " after " << sol.iterations
       << " iterations (primal residual " << sol.residuals.primal << ", dual residual " << sol.residuals.dual
       << ", gap " << sol.residuals.gap << ")";
    throw NumericFailure(os.str());
  }

  const auto& lay = ab.layout;
  BoundResult b;
  b.n = cfg.n;
  b.lags = atoms.lags;
  b.solver_objective = -sol.primal_objective;
  b.solver_status = sol.status;
  b.solver_iterations = sol.iterations;
  for (int k = 0; k < lay.num_lags; ++k) b.y.emplace_back(sol.x[lay.yre + k], sol.x[lay.yim + k]);
  for (int i = 0; i < lay.num_freqs; ++i) b.mu.push_back(std::max(sol.x[lay.mu + i], 0.0));
  for (int k = 0; k < cfg.n; ++k) b.nu.push_back(sol.x[lay.nu + k]);

  // Repair the first-order solution into an exactly feasible certificate.
  if (const double l1 = l1_norm(b.y); l1 > 1.0) {
    for (auto& v : b.y) v /= l1;
  }
  const double lam = min_eigenvalue(certificate_matrix(atoms, b.y, b.mu, b.nu));
  if (lam < 0.0) {
    const double shift = -lam * (1.0 + 1e-9) + 1e-14;
    for (auto& v : b.nu) v += shift;
  }
  double objective = certificate_objective(atoms.caps, b.mu, b.nu);
  if (!(objective > 0.0)) {
    std::fill(b.y.begin(), b.y.end(), cplx(0.0));
    std::fill(b.mu.begin(), b.mu.end(), 0.0);
    std::fill(b.nu.begin(), b.nu.end(), 0.0);
    objective = 0.0;
  }
  b.t_lb = objective;
  b.npsl_lb_db = b.t_lb > 0.0 ? 20.0 * std::log10(b.t_lb / cfg.n) : -std::numeric_limits<double>::infinity();
  b.min_eigenvalue = min_eigenvalue(certificate_matrix(atoms, b.y, b.mu, b.nu));
  b.y_l1 = l1_norm(b.y);
  b.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return b;
}

CertificateReport verify_certificate(const BoundResult& b, const DesignConfig& cfg) {
  CertificateReport r;
  ConstraintAtoms atoms;
  try {
    atoms = build_atoms(cfg);
  } catch (const std::exception&) {
    return r;
  }
  if (b.y.size() != atoms.lags.size() || b.mu.size() != atoms.freqs.size() ||
      b.nu.size() != static_cast<std::size_t>(cfg.n)) {
    return r;
  }
  r.min_eigenvalue = min_eigenvalue(certificate_matrix(atoms, b.y, b.mu, b.nu));
  r.y_l1 = l1_norm(b.y);
  r.min_mu = b.mu.empty() ? 0.0 : *std::min_element(b.mu.begin(), b.mu.end());
  r.objective = certificate_objective(atoms.caps, b.mu, b.nu);
  r.objective_error = std::abs(std::max(r.objective, 0.0) - b.t_lb);
  r.psd_ok = r.min_eigenvalue >= -kEigTol;
  r.l1_ok = r.y_l1 <= 1.0 + kL1Tol;
  r.mu_ok = r.min_mu >= -kMuTol;
  r.objective_ok = r.objective_error <= kObjectiveTol * std::max(1.0, b.t_lb);
  return r;
}

double lagrangian(double t, const Eigen::VectorXcd& x, const std::vector<double>& lambda,
                  const std::vector<double>& mu, const std::vector<double>& nu, const DesignConfig& cfg) {
  double v = common_terms(t, x, lambda, mu, nu, cfg);
  const auto lags = cfg.lags();
  for (std::size_t k = 0; k < lags.size(); ++k) v += lambda[k] * std::abs(shifted_form(x, lags[k]));
  return v;
}

double modified_lagrangian(double t, const Eigen::VectorXcd& x, const std::vector<double>& theta,
                           const std::vector<double>& lambda, const std::vector<double>& mu,
                           const std::vector<double>& nu, const DesignConfig& cfg) {
  const auto lags = cfg.lags();
  if (theta.size() != lags.size()) throw InvalidInput("modified_lagrangian: one theta per constrained lag");
  double v = common_terms(t, x, lambda, mu, nu, cfg);
  for (std::size_t k = 0; k < lags.size(); ++k) {
    v += lambda[k] * (std::polar(1.0, -theta[k]) * shifted_form(x, lags[k])).real();
  }
  return v;
}

double trivial_npsl_bound_db(int n) {
  if (n < 2) throw InvalidInput("trivial_npsl_bound_db: N must be at least 2");
  return 20.0 * std::log10(1.0 / n);
}

}  // namespace pslforge
