#include "pslforge/am.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "pslforge/assembly.hpp"
#include "pslforge/errors.hpp"
#include "pslforge/metrics.hpp"

namespace pslforge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_length(int n, const char* who) {
  if (n < 2) throw InvalidInput(std::string(who) + ": N must be at least 2");
}

double penalty_gap(const HermitianMatrix& x1, const HermitianMatrix& x2) {
  const double n = x1.dim();
  return 1.0 - trace_product(x1, x2) / (n * n);
}

std::string describe_failure(const char* which, int phi, const conic::ConicSolution& sol) {
  std::ostringstream os;
  os << "alternating minimization: subproblem " << which << " at iteration " << phi << " ended with status "
     << conic::to_string(sol.status) << " after " << sol.iterations << " iterations (primal residual "
     << sol.residuals.primal << ", dual residual " << sol.residuals.dual << ", gap " << sol.residuals.gap << ")";
  return os.str();
}

}  // namespace

Sequence init_random(int n, std::uint64_t seed) {
  require_length(n, "init_random");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::vector<double> phases(static_cast<std::size_t>(n));
  for (auto& p : phases) p = phase(rng);
  return sequence_from_phases(phases);
}

Sequence init_golomb(int n) {
  require_length(n, "init_golomb");
  std::vector<double> phases(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) phases[static_cast<std::size_t>(k)] = std::numbers::pi * k * (k + 1.0) / n;
  return sequence_from_phases(phases);
}

Sequence init_cyclic_stopband(const DesignConfig& cfg, int iters, std::uint64_t seed) {
  if (iters < 0) throw InvalidInput("init_cyclic_stopband: iteration count must be nonnegative");
  Sequence start = init_random(cfg.n, seed);
  if (iters == 0 || cfg.mask.intervals().empty()) return start;

  const int n = cfg.n;
  const int bins = 10 * n;
  std::vector<char> stop(static_cast<std::size_t>(bins));
  for (int k = 0; k < bins; ++k) stop[static_cast<std::size_t>(k)] = cfg.mask.in_stopband(static_cast<double>(k) / bins);

  Eigen::FFT<double> fft;
  std::vector<cplx> x(start.values().data(), start.values().data() + n);
  std::vector<cplx> padded(static_cast<std::size_t>(bins));
  std::vector<cplx> spectrum;
  std::vector<cplx> back;
  for (int it = 0; it < iters; ++it) {
    std::fill(padded.begin(), padded.end(), cplx(0.0));
    std::copy(x.begin(), x.end(), padded.begin());
    fft.fwd(spectrum, padded);
    for (int k = 0; k < bins; ++k) {
      if (stop[static_cast<std::size_t>(k)]) spectrum[static_cast<std::size_t>(k)] = 0.0;
    }
    fft.inv(back, spectrum);
    for (int k = 0; k < n; ++k) {
      const cplx v = back[static_cast<std::size_t>(k)];
      if (std::abs(v) > 0.0) x[static_cast<std::size_t>(k)] = v / std::abs(v);
    }
  }
  return Sequence(std::span<const cplx>(x));
}

Sequence initial_sequence(const DesignConfig& cfg) {
  switch (cfg.initializer) {
    case Initializer::Random: return init_random(cfg.n, cfg.seed);
    case Initializer::Golomb: return init_golomb(cfg.n);
    case Initializer::Cyclic: return init_cyclic_stopband(cfg, cfg.init_iters, cfg.seed);
  }
  throw InvalidInput("unknown initializer");
}

std::string to_string(DesignStatus status) {
  switch (status) {
    case DesignStatus::Converged: return "converged";
    case DesignStatus::RankFailure: return "rank-failure";
    case DesignStatus::IterCap: return "iter-cap";
  }
  return "?";
}

RankOneExtraction extract_rank_one(const HermitianMatrix& x, double eps_rank) {
  const auto ed = eigh(x);
  const Eigen::VectorXd& lam = ed.values;  // descending
  const double scale = std::max(std::abs(lam[0]), std::abs(lam[lam.size() - 1]));
  if (lam[lam.size() - 1] < -1e-6 * std::max(1.0, scale)) {
    throw InvalidInput("extract_rank_one: matrix is not positive semidefinite");
  }
  RankOneExtraction out;
  out.sigma0 = std::max(lam[0], 0.0);
  if (out.sigma0 <= 0.0) throw DegenerateInput("extract_rank_one: largest singular value is zero");
  out.sigma1 = lam.size() > 1 ? std::max(std::abs(lam[1]), std::abs(lam[lam.size() - 1])) : 0.0;
  out.sigma1 = std::min(out.sigma1, out.sigma0);
  out.x = std::sqrt(out.sigma0) * ed.vectors.col(0);
  if (std::abs(out.x[0]) > 0.0) out.x *= std::conj(out.x[0]) / std::abs(out.x[0]);
  out.success = out.ratio() <= eps_rank;
  return out;
}

ConstraintReport constraint_report(const Sequence& x, const DesignConfig& cfg) {
  ConstraintReport r;
  for (int k = 0; k < x.size(); ++k) r.max_modulus_error = std::max(r.max_modulus_error, std::abs(std::abs(x[k]) - 1.0));
  r.max_grid_violation = max_grid_violation_ratio(x, cfg.mask);
  return r;
}

DesignResult run_am(const DesignConfig& cfg, const Sequence& x_init, const AmObserver& observer) {
  cfg.validate();
  if (x_init.size() != cfg.n) {
    throw InvalidInput("run_am: initial sequence has length " + std::to_string(x_init.size()) + ", expected " +
                       std::to_string(cfg.n));
  }
  if (!x_init.is_unimodular(1e-6)) throw InvalidInput("run_am: initial sequence must be unimodular");

  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  const ConstraintAtoms atoms = build_atoms(cfg);

  DesignResult res;
  AmState& st = res.state;
  st.x2 = HermitianMatrix::outer(x_init.values());
  st.x1 = st.x2;
  st.gap = penalty_gap(st.x1, st.x2);
  const double p0 = psl(x_init, cfg.lags());
  st.t = p0 * p0;

  bool gap_met = false;
  while (st.phi < cfg.phi_max) {
    const auto it_start = std::chrono::steady_clock::now();
    AmIteration rec;

    const auto sub1 = assemble_subproblem_1(st.x2, cfg, atoms);
    const auto sol1 = conic::solve(sub1.program, cfg.solver);
    if (sol1.status != conic::SolveStatus::Optimal) throw NumericFailure(describe_failure("1", st.phi, sol1));
    st.x1 = subproblem_matrix(sub1, sol1);
    rec.solver_iterations_1 = sol1.iterations;

    const auto sub2 = assemble_subproblem_2(st.x1, cfg, atoms);
    const auto sol2 = conic::solve(sub2.program, cfg.solver);
    if (sol2.status != conic::SolveStatus::Optimal) throw NumericFailure(describe_failure("2", st.phi, sol2));
    st.x2 = subproblem_matrix(sub2, sol2);
    rec.solver_iterations_2 = sol2.iterations;

    st.t = subproblem_t(sub2, st.x2, atoms);
    st.gap = penalty_gap(st.x1, st.x2);
    ++st.phi;
    rec.t = st.t;
    rec.gap = st.gap;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - it_start).count();
    res.trace.push_back(rec);
    if (observer) observer(st, rec);
    if (st.gap <= cfg.eps_x) {
      gap_met = true;
      break;
    }
  }

  const RankOneExtraction ex = extract_rank_one(st.x2, cfg.eps_rank);
  res.sigma_ratio = ex.ratio();
  const Sequence raw(ex.x);
  res.raw = raw;
  res.pre_projection = constraint_report(raw, cfg);
  if (!gap_met) {
    res.status = DesignStatus::IterCap;
  } else if (!ex.success) {
    res.status = DesignStatus::RankFailure;
  } else {
    res.status = DesignStatus::Converged;
  }
  if (ex.success) {
    res.sequence = project_to_unimodular(raw);
    res.post_projection = constraint_report(*res.sequence, cfg);
  }
  res.seconds = elapsed();
  return res;
}

}  // namespace pslforge
