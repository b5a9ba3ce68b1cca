#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>

#include "engines.hpp"
#include "lapack.hpp"
#include "pslforge/errors.hpp"

namespace pslforge::conic::detail {

namespace {

constexpr double kMinScale = 1e-4;
constexpr double kMaxScale = 1e4;
constexpr int kRuizPasses = 25;

}  // namespace

struct AdmmEngine::State {
  const ConicProgram& prog;
  SolverSettings set;
  int n = 0;
  int m = 0;

  // Scaled data: As = D A E, bs = sigma_b D b, cs = sigma_c E c.
  Eigen::SparseMatrix<double> As;
  Eigen::VectorXd bs, cs, D, E;
  double sigma_b = 1.0, sigma_c = 1.0;

  // Splitting metric R = diag(rho_x I, ry, 1); ry = 1 / scale (zero-cone rows 1 / (1000 scale)).
  double scale = 0.1;
  Eigen::VectorXd ry;
  Eigen::VectorXd h;  // [cs; bs]
  Eigen::SparseMatrix<double> K;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> kkt;
  Eigen::VectorXd g;  // K^{-1} h
  double hg = 0.0;

  std::vector<std::pair<int, Cone>> blocks;  // (first row, cone)
  std::vector<PsdProjector> psd;

  State(const ConicProgram& p, const SolverSettings& s) : prog(p), set(s) {
    n = prog.num_vars();
    m = prog.num_rows();
    int row = 0;
    for (const auto& k : prog.cones) {
      blocks.emplace_back(row, k);
      if (k.kind == ConeKind::Psd) psd.emplace_back(k.size);
      row += k.dim();
    }
    equilibrate();
    h.resize(n + m);
    h << cs, bs;
    scale = set.initial_scale;
    build_kkt();
    kkt.analyzePattern(K);
    refactor();
  }

  void equilibrate() {
    As = prog.A;
    D = Eigen::VectorXd::Ones(m);
    E = Eigen::VectorXd::Ones(n);
    if (set.scale) {
      for (int pass = 0; pass < kRuizPasses; ++pass) {
        Eigen::VectorXd rn = Eigen::VectorXd::Zero(m);
        Eigen::VectorXd cn = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < As.outerSize(); ++k) {
          for (Eigen::SparseMatrix<double>::InnerIterator it(As, k); it; ++it) {
            const double a = std::abs(it.value());
            rn[it.row()] = std::max(rn[it.row()], a);
            cn[it.col()] = std::max(cn[it.col()], a);
          }
        }
        // SOC and PSD blocks need one common row scale to stay cones.
        for (const auto& [first, cone] : blocks) {
          if (cone.kind == ConeKind::SecondOrder || cone.kind == ConeKind::Psd) {
            auto seg = rn.segment(first, cone.dim());
            seg.setConstant(seg.mean());
          }
        }
        Eigen::VectorXd dr(m), dc(n);
        for (int i = 0; i < m; ++i) dr[i] = rn[i] < kMinScale ? 1.0 : 1.0 / std::sqrt(rn[i]);
        for (int j = 0; j < n; ++j) dc[j] = cn[j] < kMinScale ? 1.0 : 1.0 / std::sqrt(cn[j]);
        As = dr.asDiagonal() * As * dc.asDiagonal();
        D = D.cwiseProduct(dr);
        E = E.cwiseProduct(dc);
      }
      D = D.cwiseMax(kMinScale).cwiseMin(kMaxScale);
      E = E.cwiseMax(kMinScale).cwiseMin(kMaxScale);
      As = D.asDiagonal() * prog.A * E.asDiagonal();
    }
    bs = D.cwiseProduct(prog.b);
    cs = E.cwiseProduct(prog.c);
    if (set.scale) {
      Eigen::VectorXd row_sq = Eigen::VectorXd::Zero(m);
      double mean_col = 0.0;
      for (int k = 0; k < As.outerSize(); ++k) {
        double col_sq = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(As, k); it; ++it) {
          col_sq += it.value() * it.value();
          row_sq[it.row()] += it.value() * it.value();
        }
        mean_col += std::sqrt(col_sq);
      }
      mean_col /= n;
      const double mean_row = row_sq.cwiseSqrt().mean();
      sigma_b = mean_col / std::max(bs.norm(), kMinScale);
      sigma_c = mean_row / std::max(cs.norm(), kMinScale);
      bs *= sigma_b;
      cs *= sigma_c;
    }
  }

  void build_kkt() {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(As.nonZeros() + n + m));
    for (int j = 0; j < n; ++j) t.emplace_back(j, j, 1.0);
    for (int i = 0; i < m; ++i) t.emplace_back(n + i, n + i, -1.0);
    for (int k = 0; k < As.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(As, k); it; ++it) {
        t.emplace_back(n + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      }
    }
    K.resize(n + m, n + m);
    K.setFromTriplets(t.begin(), t.end());
    K.makeCompressed();
  }

  // Numeric factorization of [[rho_x I, As'], [As, -diag(ry)]] for the current scale.
  void refactor() {
    ry.resize(m);
    for (const auto& [first, cone] : blocks) {
      const double r = cone.kind == ConeKind::Zero ? 1.0 / (1000.0 * scale) : 1.0 / scale;
      ry.segment(first, cone.dim()).setConstant(r);
    }
    for (int j = 0; j < n + m; ++j) K.coeffRef(j, j) = j < n ? set.rho_x : -ry[j - n];
    kkt.factorize(K);
    if (kkt.info() != Eigen::Success) throw NumericFailure("conic solver: KKT factorization failed");
    g = solve_k(h);
    hg = h.dot(g);
  }

  // Solves [[rho_x I, As'], [-As, diag(ry)]] z = r.
  Eigen::VectorXd solve_k(const Eigen::VectorXd& r) const {
    Eigen::VectorXd rhs = r;
    rhs.tail(m) = -rhs.tail(m);
    return kkt.solve(rhs);
  }

  void project_dual_cones(Eigen::Ref<Eigen::VectorXd> y) {
    std::size_t p = 0;
    for (const auto& [first, cone] : blocks) {
      auto seg = y.segment(first, cone.dim());
      if (cone.kind == ConeKind::Psd) psd[p++].project(seg);
      else project_onto_dual_cone(cone, seg);
    }
  }

  // Unscaled candidate from the scaled homogeneous point (x, y, s, tau).
  ConicSolution candidate(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& s,
                          double tau) const {
    ConicSolution sol;
    sol.x = E.cwiseProduct(x) / (tau * sigma_b);
    sol.y = D.cwiseProduct(y) / (tau * sigma_c);
    sol.s = s.cwiseQuotient(D) / (tau * sigma_b);
    sol.primal_objective = prog.c.dot(sol.x);
    sol.dual_objective = -prog.b.dot(sol.y);
    sol.residuals = kkt_residuals(prog, sol);
    return sol;
  }

  Certificate infeasibility(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& s) const {
    const Eigen::VectorXd yu = D.cwiseProduct(y);
    const double by = prog.b.dot(yu);
    if (by < 0 && inf_norm(prog.A.transpose() * yu) <= set.eps_infeas * -by) return Certificate::PrimalInfeasible;
    const Eigen::VectorXd xu = E.cwiseProduct(x);
    const double cx = prog.c.dot(xu);
    if (cx < 0 && inf_norm(prog.A * xu + s.cwiseQuotient(D)) <= set.eps_infeas * -cx) {
      return Certificate::DualInfeasible;
    }
    return Certificate::None;
  }

  ConicSolution run() {
    constexpr int kMinItersBetweenRescale = 100;
    constexpr double kRescaleTrigger = 3.0;
    const auto start = std::chrono::steady_clock::now();
    const auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    const int nm = n + m;
    const int l = nm + 1;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(l);
    w[nm] = 1.0;
    Eigen::VectorXd ut(l), u(l), q(l), p(nm), z0(nm), s(m);
    const double a = set.alpha;
    int last_rescale = 0;
    double log_balance = 0.0;
    const double b_norm = inf_norm(prog.b);
    const double c_norm = inf_norm(prog.c);
    int balance_samples = 0;

    ConicSolution best;
    double best_ratio = std::numeric_limits<double>::infinity();
    bool have_best = false;

    int k = 0;
    for (; k < set.max_iters; ++k) {
      p.head(n) = set.rho_x * w.head(n);
      p.tail(m) = ry.cwiseProduct(w.segment(n, m));
      z0 = solve_k(p);
      const double tau_t = (w[nm] + h.dot(z0)) / (1.0 + hg);
      ut.head(nm) = z0 - tau_t * g;
      ut[nm] = tau_t;

      q = 2.0 * ut - w;
      u = q;
      project_dual_cones(u.segment(n, m));
      u[nm] = std::max(u[nm], 0.0);
      w += a * (u - ut);

      if ((k + 1) % set.check_interval != 0) continue;
      const double tau = u[nm];
      const double kappa = u[nm] - q[nm];
      s = ry.cwiseProduct(u.segment(n, m) - q.segment(n, m));
      const Eigen::VectorXd x = u.head(n);
      const Eigen::VectorXd y = u.segment(n, m);
      if (tau > 1e-12 * std::max(1.0, kappa)) {
        ConicSolution cand = candidate(x, y, s, tau);
        const double ratio = cand.residuals.worst_ratio(set.eps_abs, set.eps_rel);
        if (set.verbose > 0 && (k + 1) % set.verbose == 0) {
          std::cerr << "  iter " << (k + 1) << " pobj " << cand.primal_objective << " dobj "
                    << cand.dual_objective << " pres " << cand.residuals.primal << " dres "
                    << cand.residuals.dual << " gap " << cand.residuals.gap << " scale " << scale << '\n';
        }
        if (ratio <= 1.0) {
          cand.status = SolveStatus::Optimal;
          cand.iterations = k + 1;
          cand.seconds = elapsed();
          return cand;
        }
        if (ratio < best_ratio) {
          best_ratio = ratio;
          best = std::move(cand);
          have_best = true;
        }
        if (set.adapt_scale) {
          // Geometric mean of the primal/dual progress ratio since the last rescale.
          const auto& r = cand.residuals;
          const double pri = r.primal / (1.0 + b_norm);
          const double dua = r.dual / (1.0 + c_norm);
          log_balance += std::log(std::max(pri, 1e-300)) - std::log(std::max(dua, 1e-300));
          ++balance_samples;
        }
        if (set.adapt_scale && k + 1 - last_rescale >= kMinItersBetweenRescale) {
          const double factor = std::sqrt(std::exp(log_balance / std::max(balance_samples, 1)));
          if (factor > kRescaleTrigger || factor < 1.0 / kRescaleTrigger) {
            const double next = std::clamp(scale * factor, 1e-6, 1e6);
            if (next != scale) {
              // Keep u, u~ and the implied slack fixed; move w to match the new metric.
              const Eigen::VectorXd rsk = ry.cwiseProduct(w.segment(n, m) + u.segment(n, m) - 2.0 * ut.segment(n, m));
              scale = next;
              refactor();
              w.segment(n, m) = rsk.cwiseQuotient(ry) + 2.0 * ut.segment(n, m) - u.segment(n, m);
              last_rescale = k + 1;
              log_balance = 0.0;
              balance_samples = 0;
            }
          }
        }
      }
      if (tau >= kappa) continue;
      if (const auto cert = infeasibility(x, y, s); cert != Certificate::None) {
        ConicSolution out;
        out.x = E.cwiseProduct(x);
        out.y = D.cwiseProduct(y);
        out.s = s.cwiseQuotient(D);
        out.primal_objective = prog.c.dot(out.x);
        out.dual_objective = -prog.b.dot(out.y);
        out.residuals = kkt_residuals(prog, out);
        out.status = SolveStatus::InfeasibleDetected;
        out.certificate = cert;
        out.iterations = k + 1;
        out.seconds = elapsed();
        return out;
      }
    }
    if (!have_best) {
      best.x = Eigen::VectorXd::Zero(n);
      best.y = Eigen::VectorXd::Zero(m);
      best.s = Eigen::VectorXd::Zero(m);
      best.residuals = kkt_residuals(prog, best);
    }
    best.status = SolveStatus::MaxIterations;
    best.iterations = k;
    best.seconds = elapsed();
    return best;
  }
};

AdmmEngine::AdmmEngine(const ConicProgram& program, const SolverSettings& settings)
    : state_(std::make_unique<State>(program, settings)) {}
AdmmEngine::~AdmmEngine() = default;
AdmmEngine::AdmmEngine(AdmmEngine&&) noexcept = default;
AdmmEngine& AdmmEngine::operator=(AdmmEngine&&) noexcept = default;

ConicSolution AdmmEngine::run() { return state_->run(); }

}  // namespace pslforge::conic::detail
