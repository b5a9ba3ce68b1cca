#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/SVD>

#include "engines.hpp"
#include "lapack.hpp"
#include "pslforge/errors.hpp"

namespace pslforge::conic::detail {

namespace {

constexpr double kStep = 0.99;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Block {
  ConeKind kind;
  int first;  // row offset in the cone part
  int dim;
  int order;  // PSD only
};

enum class Op { W, WInv, WT, WInvT };

// Nesterov-Todd scaling of one block: W z = W^{-T} s = lambda.
struct BlockScaling {
  Eigen::VectorXd w;              // nonneg: sqrt(s / z)
  double beta = 1.0;              // soc: W = beta (2 v v' - J)
  Eigen::VectorXd v;
  Eigen::MatrixXd r, rinv;        // psd: W(Z) = R' Z R
  Eigen::VectorXd eig;            // psd: diagonal of lambda
};

struct Direction {
  Eigen::VectorXd x, y, zs;  // zs is the scaled dual step W dz
};

class InteriorPoint {
 public:
  InteriorPoint(const ConicProgram& prog, const SolverSettings& set) : prog_(prog), set_(set) {
    n_ = prog.num_vars();
    std::vector<int> eq_rows, cone_rows;
    int row = 0;
    for (const auto& k : prog.cones) {
      const int d = k.dim();
      if (k.kind == ConeKind::Zero) {
        for (int i = 0; i < d; ++i) eq_rows.push_back(row + i);
      } else {
        blocks_.push_back({k.kind, static_cast<int>(cone_rows.size()), d, k.kind == ConeKind::Psd ? k.size : 0});
        for (int i = 0; i < d; ++i) cone_rows.push_back(row + i);
        degree_ += k.kind == ConeKind::NonNegative ? d : (k.kind == ConeKind::SecondOrder ? 1 : k.size);
      }
      row += d;
    }
    p_ = static_cast<int>(eq_rows.size());
    m_ = static_cast<int>(cone_rows.size());
    eq_rows_ = eq_rows;
    cone_rows_ = cone_rows;

    std::vector<int> where(static_cast<std::size_t>(prog.num_rows()));
    for (int i = 0; i < p_; ++i) where[static_cast<std::size_t>(eq_rows[static_cast<std::size_t>(i)])] = -(i + 1);
    for (int i = 0; i < m_; ++i) where[static_cast<std::size_t>(cone_rows[static_cast<std::size_t>(i)])] = i;
    std::vector<Eigen::Triplet<double>> te, tg;
    for (int k = 0; k < prog.A.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(prog.A, k); it; ++it) {
        const int w = where[static_cast<std::size_t>(it.row())];
        if (w < 0) te.emplace_back(-w - 1, it.col(), it.value());
        else tg.emplace_back(w, it.col(), it.value());
      }
    }
    a_.resize(p_, n_);
    a_.setFromTriplets(te.begin(), te.end());
    g_.resize(m_, n_);
    g_.setFromTriplets(tg.begin(), tg.end());
    b_.resize(p_);
    for (int i = 0; i < p_; ++i) b_[i] = prog.b[eq_rows[static_cast<std::size_t>(i)]];
    h_.resize(m_);
    for (int i = 0; i < m_; ++i) h_[i] = prog.b[cone_rows[static_cast<std::size_t>(i)]];
    c_ = prog.c;
    ata_ = Eigen::MatrixXd(a_.transpose() * a_);

    block_of_row_.resize(static_cast<std::size_t>(m_));
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
      const auto& blk = blocks_[bi];
      for (int i = 0; i < blk.dim; ++i) block_of_row_[static_cast<std::size_t>(blk.first + i)] = static_cast<int>(bi);
      if (blk.kind == ConeKind::Psd) {
        eig_.emplace_back(blk.order);
        auto& pos = svec_pos_.emplace_back();
        for (int j = 0; j < blk.order; ++j) {
          for (int i = j; i < blk.order; ++i) pos.emplace_back(i, j);
        }
      } else {
        eig_.emplace_back(1);
        svec_pos_.emplace_back();
      }
    }
    scaling_.resize(blocks_.size());
  }

  ConicSolution run() {
    const auto start = std::chrono::steady_clock::now();
    const auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

    ConicSolution best;
    double best_ratio = kInf;
    int iter = 0;
    try {
      initial_point();
      for (; iter <= set_.ipm_max_iters; ++iter) {
        const Eigen::VectorXd rx = a_.transpose() * y_ + g_.transpose() * z_ + c_ * tau_;
        const Eigen::VectorXd ry = a_ * x_ - b_ * tau_;
        const Eigen::VectorXd rz = s_ + g_ * x_ - h_ * tau_;
        const double cx = c_.dot(x_), by = b_.dot(y_), hz = h_.dot(z_);
        const double rt = kappa_ + cx + by + hz;

        ConicSolution cand = assemble(x_ / tau_, y_ / tau_, z_ / tau_, s_ / tau_);
        const double ratio = cand.residuals.worst_ratio(set_.eps_abs, set_.eps_rel);
        if (set_.verbose > 0 && iter % set_.verbose == 0) {
          std::cerr << "  ipm " << iter << " pobj " << cand.primal_objective << " dobj " << cand.dual_objective
                    << " pres " << cand.residuals.primal << " dres " << cand.residuals.dual << " gap "
                    << cand.residuals.gap << " tau " << tau_ << " kappa " << kappa_ << '\n';
        }
        if (ratio <= 1.0) {
          cand.status = SolveStatus::Optimal;
          cand.iterations = iter;
          cand.seconds = elapsed();
          return cand;
        }
        if (ratio < best_ratio) {
          best_ratio = ratio;
          best = std::move(cand);
        }
        if (auto cert = infeasibility(cx, by, hz)) {
          cert->iterations = iter;
          cert->seconds = elapsed();
          return *cert;
        }
        if (iter == set_.ipm_max_iters) break;

        compute_scaling();
        factor();
        const double gap = s_.dot(z_);
        const double mu = (gap + tau_ * kappa_) / (degree_ + 1);

        const Direction d1 = solve_kkt(-c_, b_, h_);
        const Eigen::VectorXd hs = apply(Op::WInvT, h_);
        const double d1dot = c_.dot(d1.x) + b_.dot(d1.y) + hs.dot(d1.zs);

        const Eigen::VectorXd lsq = jprod(lambda_, lambda_);
        Eigen::VectorXd dsa, dza;
        double dta = 0.0, dka = 0.0, sigma = 0.0;
        bool stalled = false;
        for (int pass = 0; pass < 2; ++pass) {
          Eigen::VectorXd rc = -lsq;
          double rtk = -tau_ * kappa_;
          double reduce = 1.0;
          if (pass == 1) {
            rc += sigma * mu * identity() - jprod(dsa, dza);
            rtk += sigma * mu - dta * dka;
            reduce = 1.0 - sigma;
          }
          const Eigen::VectorXd ds_hat = lambda_solve(rc);
          const Direction d0 = solve_kkt(-reduce * rx, -reduce * ry, -reduce * rz - apply(Op::WT, ds_hat));
          const double d0dot = c_.dot(d0.x) + b_.dot(d0.y) + hs.dot(d0.zs);
          const double dtau = (-reduce * rt - rtk / tau_ - d0dot) / (d1dot - kappa_ / tau_);
          const double dkappa = (rtk - kappa_ * dtau) / tau_;
          const Eigen::VectorXd dzs = d0.zs + dtau * d1.zs;
          const Eigen::VectorXd dss = ds_hat - dzs;

          double amax = std::min(max_step(dss), max_step(dzs));
          if (dtau < 0) amax = std::min(amax, -tau_ / dtau);
          if (dkappa < 0) amax = std::min(amax, -kappa_ / dkappa);

          if (pass == 0) {
            const double step = std::min(1.0, amax);
            const double newgap =
                (lambda_ + step * dss).dot(lambda_ + step * dzs) + (tau_ + step * dtau) * (kappa_ + step * dkappa);
            const double ratio_gap = newgap / (gap + tau_ * kappa_);
            sigma = std::clamp(ratio_gap * ratio_gap * ratio_gap, 0.0, 1.0);
            dsa = dss;
            dza = dzs;
            dta = dtau;
            dka = dkappa;
            continue;
          }
          const double step = std::min(1.0, kStep * amax);
          if (!(step > 1e-12)) {
            stalled = true;
            break;
          }
          x_ += step * (d0.x + dtau * d1.x);
          y_ += step * (d0.y + dtau * d1.y);
          s_ += step * apply(Op::WT, dss);
          z_ += step * apply(Op::WInv, dzs);
          tau_ += step * dtau;
          kappa_ += step * dkappa;
        }
        if (stalled) break;
      }
    } catch (const NumericFailure& e) {
      if (set_.verbose > 0) std::cerr << "  ipm stopped: " << e.what() << '\n';
    }
    if (best.x.size() == 0) best = assemble(Eigen::VectorXd::Zero(n_), Eigen::VectorXd::Zero(p_),
                                            Eigen::VectorXd::Zero(m_), Eigen::VectorXd::Zero(m_));
    best.status = SolveStatus::MaxIterations;
    best.iterations = iter;
    best.seconds = elapsed();
    return best;
  }

 private:
  // Full-length solution from the split (x, y, z, s).
  ConicSolution assemble(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                         const Eigen::VectorXd& s) const {
    ConicSolution sol;
    sol.x = x;
    sol.y = Eigen::VectorXd::Zero(prog_.num_rows());
    sol.s = Eigen::VectorXd::Zero(prog_.num_rows());
    for (int i = 0; i < p_; ++i) sol.y[eq_rows_[static_cast<std::size_t>(i)]] = y[i];
    for (int i = 0; i < m_; ++i) {
      sol.y[cone_rows_[static_cast<std::size_t>(i)]] = z[i];
      sol.s[cone_rows_[static_cast<std::size_t>(i)]] = s[i];
    }
    sol.primal_objective = prog_.c.dot(sol.x);
    sol.dual_objective = -prog_.b.dot(sol.y);
    sol.residuals = kkt_residuals(prog_, sol);
    return sol;
  }

  std::optional<ConicSolution> infeasibility(double cx, double by, double hz) const {
    const double dual_ray = -(by + hz);
    if (dual_ray > 0) {
      const Eigen::VectorXd aty = a_.transpose() * y_ + g_.transpose() * z_;
      if (inf_norm(aty) <= set_.eps_infeas * dual_ray) {
        ConicSolution out = assemble(Eigen::VectorXd::Zero(n_), y_ / dual_ray, z_ / dual_ray,
                                     Eigen::VectorXd::Zero(m_));
        out.status = SolveStatus::InfeasibleDetected;
        out.certificate = Certificate::PrimalInfeasible;
        return out;
      }
    }
    if (cx < 0) {
      const double res = std::max(inf_norm(a_ * x_), inf_norm(g_ * x_ + s_));
      if (res <= set_.eps_infeas * -cx) {
        ConicSolution out = assemble(x_ / -cx, Eigen::VectorXd::Zero(p_), Eigen::VectorXd::Zero(m_), s_ / -cx);
        out.status = SolveStatus::InfeasibleDetected;
        out.certificate = Certificate::DualInfeasible;
        return out;
      }
    }
    return std::nullopt;
  }

  Eigen::VectorXd identity() const {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m_);
    for (const auto& blk : blocks_) {
      switch (blk.kind) {
        case ConeKind::NonNegative: e.segment(blk.first, blk.dim).setOnes(); break;
        case ConeKind::SecondOrder: e[blk.first] = 1.0; break;
        case ConeKind::Psd: {
          int idx = blk.first;
          for (int j = 0; j < blk.order; ++j) {
            e[idx] = 1.0;
            idx += blk.order - j;
          }
          break;
        }
        case ConeKind::Zero: break;
      }
    }
    return e;
  }

  void set_identity_scaling() {
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
      const auto& blk = blocks_[bi];
      auto& sc = scaling_[bi];
      switch (blk.kind) {
        case ConeKind::NonNegative: sc.w = Eigen::VectorXd::Ones(blk.dim); break;
        case ConeKind::SecondOrder:
          sc.beta = 1.0;
          sc.v = Eigen::VectorXd::Zero(blk.dim);
          sc.v[0] = 1.0;
          break;
        case ConeKind::Psd:
          sc.r = Eigen::MatrixXd::Identity(blk.order, blk.order);
          sc.rinv = sc.r;
          break;
        case ConeKind::Zero: break;
      }
    }
  }

  // Smallest "eigenvalue" of u in each cone, minimised over blocks.
  double min_eigenvalue(const Eigen::VectorXd& u) {
    double lo = kInf;
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
      const auto& blk = blocks_[bi];
      const auto seg = u.segment(blk.first, blk.dim);
      switch (blk.kind) {
        case ConeKind::NonNegative: lo = std::min(lo, seg.minCoeff()); break;
        case ConeKind::SecondOrder: lo = std::min(lo, seg[0] - seg.tail(blk.dim - 1).norm()); break;
        case ConeKind::Psd: {
          auto& eig = eig_[bi];
          eig.matrix() = smat(seg, blk.order);
          eig.by_index(1, 1, false);
          lo = std::min(lo, eig.values()[0]);
          break;
        }
        case ConeKind::Zero: break;
      }
    }
    return lo;
  }

  void initial_point() {
    set_identity_scaling();
    factor();
    const Direction primal = solve_kkt(Eigen::VectorXd::Zero(n_), b_, h_);
    const Direction dual = solve_kkt(-c_, Eigen::VectorXd::Zero(p_), Eigen::VectorXd::Zero(m_));
    x_ = primal.x;
    s_ = -primal.zs;
    y_ = dual.y;
    z_ = dual.zs;
    const Eigen::VectorXd e = identity();
    for (Eigen::VectorXd* u : {&s_, &z_}) {
      const double shift = -min_eigenvalue(*u);
      if (shift >= -1e-8 * std::max(u->norm(), 1.0)) *u += (1.0 + shift) * e;
    }
    tau_ = 1.0;
    kappa_ = 1.0;
  }

  void compute_scaling() {
    lambda_.resize(m_);
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
      const auto& blk = blocks_[bi];
      auto& sc = scaling_[bi];
      const Eigen::VectorXd s = s_.segment(blk.first, blk.dim);
      const Eigen::VectorXd z = z_.segment(blk.first, blk.dim);
      auto lam = lambda_.segment(blk.first, blk.dim);
      switch (blk.kind) {
        case ConeKind::NonNegative:
          if ((s.array() <= 0).any() || (z.array() <= 0).any()) throw NumericFailure("iterate left the cone");
          sc.w = (s.array() / z.array()).sqrt();
          lam = (s.array() * z.array()).sqrt();
          break;
        case ConeKind::SecondOrder: {
          const double sjs = s[0] * s[0] - s.tail(blk.dim - 1).squaredNorm();
          const double zjz = z[0] * z[0] - z.tail(blk.dim - 1).squaredNorm();
          if (!(sjs > 0 && zjz > 0 && s[0] > 0 && z[0] > 0)) throw NumericFailure("iterate left the cone");
          const double sn = std::sqrt(sjs), zn = std::sqrt(zjz);
          const Eigen::VectorXd sb = s / sn, zb = z / zn;
          const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
          Eigen::VectorXd wb = sb;
          wb[0] += zb[0];
          wb.tail(blk.dim - 1) -= zb.tail(blk.dim - 1);
          wb /= 2.0 * gamma;
          sc.v = wb;
          sc.v[0] += 1.0;
          sc.v /= std::sqrt(2.0 * (wb[0] + 1.0));
          sc.beta = std::sqrt(sn / zn);
          lam = soc_w(sc, z, false);
          break;
        }
        case ConeKind::Psd: {
          const Eigen::LLT<Eigen::MatrixXd> ls(smat(s, blk.order));
          const Eigen::LLT<Eigen::MatrixXd> lz(smat(z, blk.order));
          if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) {
            throw NumericFailure("iterate left the PSD cone");
          }
          const Eigen::MatrixXd lsm = ls.matrixL();
          const Eigen::MatrixXd lzm = lz.matrixL();
          const Eigen::BDCSVD<Eigen::MatrixXd> svd(lzm.transpose() * lsm, Eigen::ComputeFullU | Eigen::ComputeFullV);
          const Eigen::VectorXd sv = svd.singularValues();
          if (!(sv.minCoeff() > 0)) throw NumericFailure("singular scaling matrix");
          const Eigen::VectorXd isq = sv.cwiseSqrt().cwiseInverse();
          sc.r = lsm * svd.matrixV() * isq.asDiagonal();
          sc.rinv = isq.asDiagonal() * svd.matrixU().transpose() * lzm.transpose();
          sc.eig = sv;
          lam.setZero();
          int idx = 0;
          for (int j = 0; j < blk.order; ++j) {
            lam[idx] = sv[j];
            idx += blk.order - j;
          }
          break;
        }
        case ConeKind::Zero: break;
      }
    }
  }

  static Eigen::VectorXd soc_w(const BlockScaling& sc, const Eigen::VectorXd& u, bool inverse) {
    // W u = beta (2 v (v'u) - J u);  W^{-1} u = (2 J v (v' J u) - J u) / beta.
    Eigen::VectorXd ju = u;
    ju.tail(u.size() - 1) = -ju.tail(u.size() - 1);
    if (!inverse) return sc.beta * (2.0 * sc.v.dot(u) * sc.v - ju);
    Eigen::VectorXd jv = sc.v;
    jv.tail(u.size() - 1) = -jv.tail(u.size() - 1);
    return (2.0 * sc.v.dot(ju) * jv - ju) / sc.beta;
  }

  Eigen::VectorXd apply(Op op, const Eigen::VectorXd& u) const {
    Eigen::VectorXd out(m_);
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
      const auto& blk = blocks_[bi];
      const auto& sc = scaling_[bi];
      const Eigen::VectorXd seg = u.segment(blk.first, blk.dim);
      auto dst = out.segment(blk.first, blk.dim);
      switch (blk.kind) {
        case ConeKind::NonNegative:
          if (op == Op::W || op == Op::WT) dst = seg.cwiseProduct(sc.w);
          else dst = seg.cwiseQuotient(sc.w);
          break;
        case ConeKind::SecondOrder: dst = soc_w(sc, seg, op == Op::WInv || op == Op::WInvT); break;
        case ConeKind::Psd: {
          const Eigen::MatrixXd mat = smat(seg, blk.order);
          switch (op) {
            case Op::W: dst = svec(sc.r.transpose() * mat * sc.r); break;
            case Op::WInv: dst = svec(sc.rinv.transpose() * mat * sc.rinv); break;
            case Op::WT: dst = svec(sc.r * mat * sc.r.transpose()); break;
            case Op::WInvT: dst = svec(sc.rinv * mat * sc.rinv.transpose()); break;
          }
          break;
        }
        case ConeKind::Zero: break;
      }
    }
    return out;
  }

  Eigen::VectorXd jprod(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    Eigen::VectorXd out(m_);
    for (const auto& blk : blocks_) {
      const auto a = u.segment(blk.first, blk.dim);
      const auto b = v.segment(blk.first, blk.dim);
      auto dst = out.segment(blk.first, blk.dim);
      switch (blk.kind) {
        case ConeKind::NonNegative: dst = a.cwiseProduct(b); break;
        case ConeKind::SecondOrder:
          dst[0] = a.dot(b);
          dst.tail(blk.dim - 1) = a[0] * b.tail(blk.dim - 1) + b[0] * a.tail(blk.dim - 1);
          break;
        case ConeKind::Psd: {
          const Eigen::MatrixXd am = smat(a, blk.order);
          const Eigen::MatrixXd bm = smat(b, blk.order);
          const Eigen::MatrixXd ab = am * bm;
          dst = svec(0.5 * (ab + ab.transpose()));
          break;
        }
        case ConeKind::Zero: break;
      }
    }
    return out;
  }

  // Solves lambda o x = r.
  Eigen::VectorXd lambda_solve(const Eigen::VectorXd& r) const {
    Eigen::VectorXd out(m_);
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
      const auto& blk = blocks_[bi];
      const auto l = lambda_.segment(blk.first, blk.dim);
      const auto rr = r.segment(blk.first, blk.dim);
      auto dst = out.segment(blk.first, blk.dim);
      switch (blk.kind) {
        case ConeKind::NonNegative: dst = rr.cwiseQuotient(l); break;
        case ConeKind::SecondOrder: {
          const auto l1 = l.tail(blk.dim - 1);
          const double x0 = (l[0] * rr[0] - l1.dot(rr.tail(blk.dim - 1))) / (l[0] * l[0] - l1.squaredNorm());
          dst[0] = x0;
          dst.tail(blk.dim - 1) = (rr.tail(blk.dim - 1) - x0 * l1) / l[0];
          break;
        }
        case ConeKind::Psd: {
          const auto& d = scaling_[bi].eig;
          const auto& pos = svec_pos_[bi];
          for (int k = 0; k < blk.dim; ++k) {
            const auto [i, j] = pos[static_cast<std::size_t>(k)];
            dst[k] = 2.0 * rr[k] / (d[i] + d[j]);
          }
          break;
        }
        case ConeKind::Zero: break;
      }
    }
    return out;
  }

  // Largest a with lambda + a d in the cone (infinity when unbounded).
  double max_step(const Eigen::VectorXd& d) {
    double amax = kInf;
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
      const auto& blk = blocks_[bi];
      const auto l = lambda_.segment(blk.first, blk.dim);
      const auto dd = d.segment(blk.first, blk.dim);
      switch (blk.kind) {
        case ConeKind::NonNegative:
          for (int i = 0; i < blk.dim; ++i) {
            if (dd[i] < 0) amax = std::min(amax, -l[i] / dd[i]);
          }
          break;
        case ConeKind::SecondOrder: {
          const double qa = dd[0] * dd[0] - dd.tail(blk.dim - 1).squaredNorm();
          const double qb = 2.0 * (l[0] * dd[0] - l.tail(blk.dim - 1).dot(dd.tail(blk.dim - 1)));
          const double qc = l[0] * l[0] - l.tail(blk.dim - 1).squaredNorm();
          double root = kInf;
          if (qa == 0.0) {
            if (qb < 0) root = -qc / qb;
          } else {
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc >= 0) {
              const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
              for (const double r : {q / qa, q != 0.0 ? qc / q : kInf}) {
                if (r > 0) root = std::min(root, r);
              }
            }
          }
          if (dd[0] < 0) root = std::min(root, -l[0] / dd[0]);
          amax = std::min(amax, root);
          break;
        }
        case ConeKind::Psd: {
          const auto& ev = scaling_[bi].eig;
          const Eigen::VectorXd isq = ev.cwiseSqrt().cwiseInverse();
          auto& eig = eig_[bi];
          eig.matrix() = isq.asDiagonal() * smat(dd, blk.order) * isq.asDiagonal();
          eig.by_index(1, 1, false);
          const double lo = eig.values()[0];
          if (lo < 0) amax = std::min(amax, -1.0 / lo);
          break;
        }
        case ConeKind::Zero: break;
      }
    }
    return amax;
  }

  // Forms Ghat = W^{-T} G and factors H = Ghat'Ghat + A'A (and the equality Schur complement).
  void factor() {
    ghat_.setZero(m_, n_);
    std::vector<std::vector<std::pair<int, double>>> psd_entries(blocks_.size());
    for (int j = 0; j < n_; ++j) {
      for (auto& e : psd_entries) e.clear();
      for (Eigen::SparseMatrix<double>::InnerIterator it(g_, j); it; ++it) {
        const int row = static_cast<int>(it.row());
        const auto bi = static_cast<std::size_t>(block_of_row_[static_cast<std::size_t>(row)]);
        const auto& blk = blocks_[bi];
        const auto& sc = scaling_[bi];
        switch (blk.kind) {
          case ConeKind::NonNegative: ghat_(row, j) = it.value() / sc.w[row - blk.first]; break;
          case ConeKind::SecondOrder: ghat_(row, j) = it.value(); break;
          case ConeKind::Psd: psd_entries[bi].emplace_back(row - blk.first, it.value()); break;
          case ConeKind::Zero: break;
        }
      }
      for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
        const auto& blk = blocks_[bi];
        if (blk.kind == ConeKind::SecondOrder) {
          const Eigen::VectorXd seg = ghat_.col(j).segment(blk.first, blk.dim);
          if (!seg.isZero(0.0)) ghat_.col(j).segment(blk.first, blk.dim) = soc_w(scaling_[bi], seg, true);
        } else if (blk.kind == ConeKind::Psd && !psd_entries[bi].empty()) {
          ghat_.col(j).segment(blk.first, blk.dim) = psd_column(bi, psd_entries[bi]);
        }
      }
    }
    Eigen::MatrixXd hmat = ata_;
    hmat.selfadjointView<Eigen::Lower>().rankUpdate(ghat_.transpose());
    hmat = hmat.selfadjointView<Eigen::Lower>();
    hchol_.compute(hmat);
    double reg = 1e-13 * std::max(1.0, hmat.diagonal().maxCoeff());
    for (int attempt = 0; hchol_.info() != Eigen::Success; ++attempt) {
      if (attempt == 8) throw NumericFailure("normal equations are not positive definite");
      hmat.diagonal().array() += reg;
      hchol_.compute(hmat);
      reg *= 10.0;
    }
    if (p_ > 0) {
      linv_at_ = hchol_.matrixL().solve(Eigen::MatrixXd(a_.transpose()));
      schur_.compute(linv_at_.transpose() * linv_at_);
      if (schur_.info() != Eigen::Success) throw NumericFailure("equality Schur complement is singular");
    }
  }

  // svec(R^{-1} G_j R^{-T}) for the sparse svec column entries of one PSD block.
  Eigen::VectorXd psd_column(std::size_t bi, const std::vector<std::pair<int, double>>& entries) const {
    const auto& blk = blocks_[bi];
    const auto& rinv = scaling_[bi].rinv;
    const auto& pos = svec_pos_[bi];
    Eigen::MatrixXd out;
    if (4 * static_cast<int>(entries.size()) <= blk.order) {
      out = Eigen::MatrixXd::Zero(blk.order, blk.order);
      for (const auto& [k, v] : entries) {
        const auto [i, j] = pos[static_cast<std::size_t>(k)];
        if (i == j) {
          out.noalias() += v * rinv.col(i) * rinv.col(i).transpose();
        } else {
          const double hv = v / kSqrt2;
          out.noalias() += hv * rinv.col(i) * rinv.col(j).transpose();
          out.noalias() += hv * rinv.col(j) * rinv.col(i).transpose();
        }
      }
    } else {
      Eigen::MatrixXd left = Eigen::MatrixXd::Zero(blk.order, blk.order);
      for (const auto& [k, v] : entries) {
        const auto [i, j] = pos[static_cast<std::size_t>(k)];
        if (i == j) {
          left.col(i) += v * rinv.col(i);
        } else {
          const double hv = v / kSqrt2;
          left.col(j) += hv * rinv.col(i);
          left.col(i) += hv * rinv.col(j);
        }
      }
      out.noalias() = left * rinv.transpose();
    }
    return svec(out);
  }

  // Solves [[0, A', G'], [A, 0, 0], [G, 0, -W'W]] (x, y, z) = (rx, ry, rz); returns W z in place of z.
  Direction solve_kkt(const Eigen::VectorXd& rx, const Eigen::VectorXd& ry, const Eigen::VectorXd& rz) const {
    const Eigen::VectorXd t = apply(Op::WInvT, rz);
    Eigen::VectorXd r1 = rx + ghat_.transpose() * t;
    if (p_ > 0) r1 += a_.transpose() * ry;
    Direction d;
    if (p_ > 0) {
      const Eigen::VectorXd v = hchol_.solve(r1);
      d.y = schur_.solve(a_ * v - ry);
      d.x = hchol_.solve(r1 - a_.transpose() * d.y);
    } else {
      d.y = Eigen::VectorXd::Zero(0);
      d.x = hchol_.solve(r1);
    }
    d.zs = ghat_ * d.x - t;
    return d;
  }

  const ConicProgram& prog_;
  SolverSettings set_;
  int n_ = 0, p_ = 0, m_ = 0;
  int degree_ = 0;
  std::vector<int> eq_rows_, cone_rows_;
  std::vector<Block> blocks_;
  std::vector<int> block_of_row_;
  std::vector<std::vector<std::pair<int, int>>> svec_pos_;
  std::vector<SymmetricEigen> eig_;
  Eigen::SparseMatrix<double> a_, g_;
  Eigen::VectorXd b_, h_, c_;
  Eigen::MatrixXd ata_;

  std::vector<BlockScaling> scaling_;
  Eigen::VectorXd lambda_;
  Eigen::MatrixXd ghat_, linv_at_;
  Eigen::LLT<Eigen::MatrixXd> hchol_, schur_;

  Eigen::VectorXd x_, y_, z_, s_;
  double tau_ = 1.0, kappa_ = 1.0;
};

}  // namespace

ConicSolution solve_interior_point(const ConicProgram& program, const SolverSettings& settings) {
  InteriorPoint ipm(program, settings);
  return ipm.run();
}

}  // namespace pslforge::conic::detail
