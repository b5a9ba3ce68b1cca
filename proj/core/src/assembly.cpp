#include "pslforge/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pslforge/errors.hpp"

namespace pslforge {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void check_iterate(const HermitianMatrix& x, int n, const char* who) {
  if (x.dim() != n) throw InvalidState(std::string(who) + ": fixed matrix has the wrong dimension");
  if (std::abs(x.trace() - n) > 1e-6 * n) {
    throw InvalidState(std::string(who) + ": fixed matrix must have trace N (got " + std::to_string(x.trace()) + ")");
  }
  const auto ed = eigh(x);
  if (ed.values[ed.values.size() - 1] < -1e-6 * std::max(1.0, ed.values[0])) {
    throw InvalidState(std::string(who) + ": fixed matrix is not PSD");
  }
}

// Coefficients of X -> tr(G X) where G(i, j) = src(i + shift, j + shift) (zero outside).
Eigen::VectorXd shifted_functional(const HermitianCoordinates& hc, const HermitianMatrix& src, int shift) {
  const int n = hc.n();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(hc.size());
  auto at = [&](int i, int j) -> cplx {
    const int a = i + shift, b = j + shift;
    if (a < 0 || b < 0 || a >= n || b >= n) return 0.0;
    return src(a, b);
  };
  for (int i = 0; i < n; ++i) {
    g[hc.diag(i)] = at(i, i).real();
    for (int j = i + 1; j < n; ++j) {
      const cplx v = at(i, j);
      g[hc.re(i, j)] = 2.0 * v.real();
      g[hc.im(i, j)] = 2.0 * v.imag();
    }
  }
  return g;
}

// G(i, j) = src(i + shift, j + shift), zero outside.
HermitianMatrix shifted(const HermitianMatrix& src, int shift) {
  const int n = src.dim();
  HermitianMatrix g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const int a = i + shift, b = j + shift;
      if (a >= 0 && b >= 0 && a < n && b < n) g.set(i, j, src(a, b));
    }
  }
  return g;
}

// Adds scale * embed(g) to the PSD slack through column `var` (slack = b - A x).
void add_embedded(conic::ProgramBuilder& pb, int psd_row, int var, const HermitianMatrix& g, double scale) {
  const int n = g.dim();
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const cplx v = g(a, b);
      if (v == cplx(0.0, 0.0)) continue;
      for (const auto& [idx, coef] : embedded_entry(n, a, b, v)) pb.add(psd_row + idx, var, -scale * coef);
    }
  }
}

// Lag matrix for the step variable: tr(G_l X) is the lag-l constraint value.
HermitianMatrix lag_matrix(const HermitianMatrix& fixed, bool fixed_is_x2, int lag) {
  // X1 step: G = N^l X2 N^l^T, G(i,j) = X2(i+l, j+l).  X2 step: G = N^l^T X1 N^l, G(i,j) = X1(i-l, j-l).
  return shifted(fixed, fixed_is_x2 ? lag : -lag);
}

// Multiplier program shared by both steps:
//   minimize sum nu + sum U mu (+ penalty terms)
//   subject to sum lambda = 1 - w, lambda >= 0, mu >= 0,
//              Z = C + sum nu_n E_n + sum lambda_l G_l + sum mu_i F_i >= 0.
// The step matrix X is the multiplier of the Z block.
AssembledSubproblem assemble_step(const HermitianMatrix& fixed, bool fixed_is_x2, const DesignConfig& cfg,
                                  const ConstraintAtoms& atoms) {
  const int n = cfg.n;
  const int nl = static_cast<int>(atoms.lags.size());
  const int nf = static_cast<int>(atoms.freqs.size());
  const bool penalty = fixed_is_x2;
  const double n2 = static_cast<double>(n) * n;

  AssembledSubproblem out;
  out.fixed = fixed;
  out.fixed_is_x2 = fixed_is_x2;
  auto& lay = out.layout;
  lay.n = n;
  lay.num_lags = nl;
  lay.num_freqs = nf;
  lay.nu = 0;
  lay.lam = n;
  lay.mu = n + nl;
  lay.eta = penalty ? n + nl + nf : -1;
  lay.penalty_weight = cfg.w * n2 * n2;

  conic::ProgramBuilder pb(n + nl + nf + (penalty ? 3 : 0));
  for (int k = 0; k < n; ++k) pb.set_cost(lay.nu + k, 1.0);
  for (int i = 0; i < nf; ++i) pb.set_cost(lay.mu + i, atoms.caps[static_cast<std::size_t>(i)]);
  if (penalty) {
    // eta = w N^4 (e0, e1, e2): dual of s >= q^2, q = 1 - tr(X1 X2) / N^2, as ||(2q, s - 1)|| <= s + 1.
    pb.set_cost(lay.eta, lay.penalty_weight);
    pb.set_cost(lay.eta + 1, 2.0 * lay.penalty_weight);
    pb.set_cost(lay.eta + 2, -lay.penalty_weight);
  }

  const int z = pb.add_block(conic::Cone::zero(penalty ? 2 : 1));
  for (int k = 0; k < nl; ++k) pb.add(z, lay.lam + k, 1.0);
  pb.set_rhs(z, 1.0 - cfg.w);
  if (penalty) {
    pb.add(z + 1, lay.eta, 1.0);
    pb.add(z + 1, lay.eta + 2, 1.0);
    pb.set_rhs(z + 1, 1.0);
  }
  if (nl + nf > 0) {
    const int nn = pb.add_block(conic::Cone::nonneg(nl + nf));
    for (int k = 0; k < nl; ++k) pb.add(nn + k, lay.lam + k, -1.0);
    for (int i = 0; i < nf; ++i) pb.add(nn + nl + i, lay.mu + i, -1.0);
  }
  if (penalty) {
    const int soc = pb.add_block(conic::Cone::soc(3));
    for (int k = 0; k < 3; ++k) pb.add(soc + k, lay.eta + k, -1.0);
  }

  lay.psd_row = pb.add_block(conic::Cone::psd(2 * n));
  for (int k = 0; k < n; ++k) {
    for (const auto& [idx, v] : embedded_entry(n, k, k, 1.0)) pb.add(lay.psd_row + idx, lay.nu + k, -v);
  }
  for (int k = 0; k < nl; ++k) {
    add_embedded(pb, lay.psd_row, lay.lam + k, lag_matrix(fixed, fixed_is_x2, atoms.lags[static_cast<std::size_t>(k)]),
                 1.0);
  }
  for (int i = 0; i < nf; ++i) add_embedded(pb, lay.psd_row, lay.mu + i, atoms.fourier[static_cast<std::size_t>(i)], 1.0);
  if (penalty) {
    add_embedded(pb, lay.psd_row, lay.eta + 1, fixed, 2.0 * cfg.w * n2);
  } else {
    // Constant term -w X1.
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        for (const auto& [idx, v] : embedded_entry(n, a, b, fixed(a, b))) pb.set_rhs(lay.psd_row + idx, -cfg.w * v);
      }
    }
  }
  out.program = pb.build();
  return out;
}

}  // namespace

HermitianMatrix ConstraintAtoms::basis_projector(int index) const {
  if (index < 0 || index >= n) throw InvalidInput("basis_projector: index out of range");
  HermitianMatrix e(n);
  e.set(index, index, 1.0);
  return e;
}

Eigen::MatrixXd shift_power(int n, int lag) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + lag < n; ++i) s(i, i + lag) = 1.0;
  return s;
}

HermitianMatrix fourier_outer(int n, double f) {
  HermitianMatrix h(n);
  for (int m = 0; m < n; ++m) {
    for (int k = m; k < n; ++k) h.set(m, k, std::polar(1.0, 2.0 * std::numbers::pi * f * (m - k)));
  }
  return h;
}

ConstraintAtoms build_atoms(const DesignConfig& cfg) {
  cfg.validate();
  ConstraintAtoms a;
  a.n = cfg.n;
  a.lags = cfg.lags();
  a.freqs = cfg.mask.grid();
  a.caps = cfg.mask.caps();
  a.shifts.reserve(a.lags.size());
  for (int l : a.lags) a.shifts.push_back(shift_power(cfg.n, l));
  a.fourier.reserve(a.freqs.size());
  for (double f : a.freqs) a.fourier.push_back(fourier_outer(cfg.n, f));
  return a;
}

Eigen::VectorXd HermitianCoordinates::trace_functional(const HermitianMatrix& g) const {
  return shifted_functional(*this, g, 0);
}

Eigen::VectorXd HermitianCoordinates::pack(const HermitianMatrix& x) const {
  Eigen::VectorXd z(size());
  for (int i = 0; i < n_; ++i) {
    z[diag(i)] = x(i, i).real();
    for (int j = i + 1; j < n_; ++j) {
      z[re(i, j)] = x(i, j).real();
      z[im(i, j)] = x(i, j).imag();
    }
  }
  return z;
}

HermitianMatrix HermitianCoordinates::unpack(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() < size()) throw InvalidInput("HermitianCoordinates::unpack: vector too short");
  HermitianMatrix x(n_);
  for (int i = 0; i < n_; ++i) {
    x.set(i, i, z[diag(i)]);
    for (int j = i + 1; j < n_; ++j) x.set(i, j, cplx(z[re(i, j)], z[im(i, j)]));
  }
  return x;
}

int svec_index(int row, int col, int order) { return col * order - col * (col - 1) / 2 + (row - col); }

std::vector<std::pair<int, double>> embedded_entry(int n, int i, int j, cplx value) {
  const int d = 2 * n;
  if (i == j) return {{svec_index(i, i, d), value.real()}, {svec_index(n + i, n + i, d), value.real()}};
  if (i > j) {
    std::swap(i, j);
    value = std::conj(value);
  }
  return {{svec_index(j, i, d), kSqrt2 * value.real()},
          {svec_index(n + j, n + i, d), kSqrt2 * value.real()},
          {svec_index(n + i, j, d), kSqrt2 * value.imag()},
          {svec_index(n + j, i, d), -kSqrt2 * value.imag()}};
}

HermitianMatrix decode_embedded_block(const Eigen::Ref<const Eigen::VectorXd>& svec_block, int n) {
  return real_unembed(conic::smat(svec_block, 2 * n));
}

AssembledSubproblem assemble_subproblem_1(const HermitianMatrix& x2, const DesignConfig& cfg,
                                          const ConstraintAtoms& atoms) {
  check_iterate(x2, cfg.n, "assemble_subproblem_1");
  return assemble_step(x2, /*fixed_is_x2=*/true, cfg, atoms);
}

AssembledSubproblem assemble_subproblem_2(const HermitianMatrix& x1, const DesignConfig& cfg,
                                          const ConstraintAtoms& atoms) {
  check_iterate(x1, cfg.n, "assemble_subproblem_2");
  return assemble_step(x1, /*fixed_is_x2=*/false, cfg, atoms);
}

HermitianMatrix subproblem_matrix(const AssembledSubproblem& sub, const conic::ConicSolution& sol) {
  const int n = sub.layout.n;
  const int dim = 2 * n * (2 * n + 1) / 2;
  if (sol.y.size() < sub.layout.psd_row + dim) throw InvalidInput("subproblem_matrix: solution does not match");
  const Eigen::VectorXd block = 2.0 * sol.y.segment(sub.layout.psd_row, dim);
  return decode_embedded_block(block, n);
}

double lag_value(const AssembledSubproblem& sub, const HermitianMatrix& x, int lag) {
  const HermitianMatrix g = lag_matrix(sub.fixed, sub.fixed_is_x2, lag);
  const int n = x.dim();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) acc += (g(i, j) * x(j, i)).real();
  }
  return acc;
}

double subproblem_t(const AssembledSubproblem& sub, const HermitianMatrix& x, const ConstraintAtoms& atoms) {
  double t = 0.0;
  for (int l : atoms.lags) t = std::max(t, lag_value(sub, x, l));
  return t;
}

AssembledBound assemble_bound_program(const DesignConfig& cfg, const ConstraintAtoms& atoms) {
  const int n = cfg.n;
  const int nl = static_cast<int>(atoms.lags.size());
  const int nf = static_cast<int>(atoms.freqs.size());
  AssembledBound out;
  auto& lay = out.layout;
  lay.n = n;
  lay.num_lags = nl;
  lay.num_freqs = nf;
  lay.yre = 0;
  lay.yim = nl;
  lay.mu = 2 * nl;
  lay.nu = 2 * nl + nf;
  lay.s = 2 * nl + nf + n;
  const int num_vars = 3 * nl + nf + n;

  conic::ProgramBuilder pb(num_vars);
  for (int i = 0; i < nf; ++i) pb.set_cost(lay.mu + i, atoms.caps[static_cast<std::size_t>(i)]);
  for (int k = 0; k < n; ++k) pb.set_cost(lay.nu + k, 1.0);

  // sum s <= 1, mu >= 0
  const int nn = pb.add_block(conic::Cone::nonneg(1 + nf));
  for (int k = 0; k < nl; ++k) pb.add(nn, lay.s + k, 1.0);
  pb.set_rhs(nn, 1.0);
  for (int i = 0; i < nf; ++i) pb.add(nn + 1 + i, lay.mu + i, -1.0);

  // |y_l| <= s_l
  for (int k = 0; k < nl; ++k) {
    const int r = pb.add_block(conic::Cone::soc(3));
    pb.add(r, lay.s + k, -1.0);
    pb.add(r + 1, lay.yre + k, -1.0);
    pb.add(r + 2, lay.yim + k, -1.0);
  }

  // M(y, mu, nu) >= 0 through the real embedding.
  const int psd = pb.add_block(conic::Cone::psd(2 * n));
  for (int k = 0; k < nl; ++k) {
    const int l = atoms.lags[static_cast<std::size_t>(k)];
    for (int i = 0; i + l < n; ++i) {
      // (i, i+l) entry of (conj(y) N^l + y N^l^T)/2 is conj(y)/2.
      for (const auto& [idx, v] : embedded_entry(n, i, i + l, cplx(0.5, 0.0))) pb.add(psd + idx, lay.yre + k, -v);
      for (const auto& [idx, v] : embedded_entry(n, i, i + l, cplx(0.0, -0.5))) pb.add(psd + idx, lay.yim + k, -v);
    }
  }
  for (int i = 0; i < nf; ++i) {
    const auto& f = atoms.fourier[static_cast<std::size_t>(i)];
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        for (const auto& [idx, v] : embedded_entry(n, a, b, f(a, b))) pb.add(psd + idx, lay.mu + i, -v);
      }
    }
  }
  for (int k = 0; k < n; ++k) {
    for (const auto& [idx, v] : embedded_entry(n, k, k, 1.0)) pb.add(psd + idx, lay.nu + k, -v);
  }
  out.program = pb.build();
  return out;
}

HermitianMatrix certificate_matrix(const ConstraintAtoms& atoms, const std::vector<cplx>& y,
                                   const std::vector<double>& mu, const std::vector<double>& nu) {
  const int n = atoms.n;
  if (y.size() != atoms.lags.size() || mu.size() != atoms.freqs.size() || nu.size() != static_cast<std::size_t>(n)) {
    throw InvalidInput("certificate_matrix: multiplier sizes do not match the atoms");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < y.size(); ++k) {
    const Eigen::MatrixXd& s = atoms.shifts[k];
    m += 0.5 * (std::conj(y[k]) * s.cast<cplx>() + y[k] * s.transpose().cast<cplx>());
  }
  for (std::size_t i = 0; i < mu.size(); ++i) m += mu[i] * atoms.fourier[i].dense();
  for (int k = 0; k < n; ++k) m(k, k) += nu[static_cast<std::size_t>(k)];
  return HermitianMatrix::hermitian_part(m);
}

}  // namespace pslforge
