#include "pslforge/conic.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "pslforge/errors.hpp"
#include "engines.hpp"
#include "lapack.hpp"

namespace pslforge::conic {

namespace {

using detail::inf_norm;
using detail::kSqrt2;

}  // namespace

int Cone::dim() const {
  return kind == ConeKind::Psd ? size * (size + 1) / 2 : size;
}

std::string to_string(ConeKind kind) {
  switch (kind) {
    case ConeKind::Zero: return "zero";
    case ConeKind::NonNegative: return "nonneg";
    case ConeKind::SecondOrder: return "soc";
    case ConeKind::Psd: return "psd";
  }
  return "?";
}

std::string to_string(Algorithm algorithm) {
  return algorithm == Algorithm::InteriorPoint ? "interior-point" : "operator-splitting";
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIterations: return "max-iter";
    case SolveStatus::InfeasibleDetected: return "infeasible-detected";
  }
  return "?";
}

int ConicProgram::cone_dim() const {
  int total = 0;
  for (const auto& k : cones) total += k.dim();
  return total;
}

void ConicProgram::validate() const {
  if (A.rows() != b.size() || A.cols() != c.size()) {
    throw InvalidInput("conic program: A is " + std::to_string(A.rows()) + "x" +
                       std::to_string(A.cols()) + " but b has " + std::to_string(b.size()) +
                       " and c has " + std::to_string(c.size()) + " entries");
  }
  for (const auto& k : cones) {
    if (k.size <= 0) throw InvalidInput("conic program: empty " + to_string(k.kind) + " cone");
  }
  if (cone_dim() != b.size()) {
    throw InvalidInput("conic program: cone dimensions sum to " + std::to_string(cone_dim()) +
                       ", slack has " + std::to_string(b.size()));
  }
  if (!c.allFinite() || !b.allFinite()) throw InvalidInput("conic program: non-finite b or c");
  for (int k = 0; k < A.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
      if (!std::isfinite(it.value())) throw InvalidInput("conic program: non-finite entry in A");
    }
  }
}

ProgramBuilder::ProgramBuilder(int num_vars)
    : num_vars_(num_vars), cost_(Eigen::VectorXd::Zero(num_vars)) {
  if (num_vars <= 0) throw InvalidInput("ProgramBuilder: need at least one variable");
}

void ProgramBuilder::set_cost(int var, double value) { cost_[var] = value; }

int ProgramBuilder::add_block(Cone cone) {
  const int first = num_rows();
  rhs_.resize(rhs_.size() + cone.dim(), 0.0);
  cones_.push_back(cone);
  return first;
}

void ProgramBuilder::add(int row, int var, double value) {
  if (row < 0 || row >= num_rows() || var < 0 || var >= num_vars_) {
    throw InvalidInput("ProgramBuilder: entry (" + std::to_string(row) + ", " + std::to_string(var) +
                       ") out of range");
  }
  if (value != 0.0) entries_.emplace_back(row, var, value);
}

void ProgramBuilder::set_rhs(int row, double value) { rhs_.at(row) = value; }

ConicProgram ProgramBuilder::build() const {
  ConicProgram p;
  p.c = cost_;
  p.b = Eigen::Map<const Eigen::VectorXd>(rhs_.data(), static_cast<Eigen::Index>(rhs_.size()));
  p.A.resize(num_rows(), num_vars_);
  p.A.setFromTriplets(entries_.begin(), entries_.end());
  p.A.makeCompressed();
  p.cones = cones_;
  return p;
}

void SolverSettings::validate() const {
  if (!(eps_abs > 0) || !(eps_rel > 0) || !(eps_infeas > 0)) {
    throw InvalidInput("solver settings: tolerances must be positive");
  }
  if (max_iters < 0) throw InvalidInput("solver settings: max_iters must be >= 0");
  if (!(alpha > 0 && alpha < 2)) throw InvalidInput("solver settings: alpha must lie in (0, 2)");
  if (!(rho_x > 0)) throw InvalidInput("solver settings: rho_x must be positive");
  if (!(initial_scale > 0)) throw InvalidInput("solver settings: initial_scale must be positive");
  if (check_interval < 1) throw InvalidInput("solver settings: check_interval must be >= 1");
  if (ipm_max_iters < 1) throw InvalidInput("solver settings: ipm_max_iters must be >= 1");
}

bool Residuals::within(double eps_abs, double eps_rel) const {
  return worst_ratio(eps_abs, eps_rel) <= 1.0;
}

double Residuals::worst_ratio(double eps_abs, double eps_rel) const {
  return std::max({primal / (eps_abs + eps_rel * primal_scale),
                   dual / (eps_abs + eps_rel * dual_scale),
                   gap / (eps_abs + eps_rel * gap_scale)});
}

Eigen::VectorXd svec(const Eigen::MatrixXd& s) {
  const auto d = s.rows();
  Eigen::VectorXd v(d * (d + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < d; ++j) {
    v[k++] = s(j, j);
    for (Eigen::Index i = j + 1; i < d; ++i) v[k++] = kSqrt2 * 0.5 * (s(i, j) + s(j, i));
  }
  return v;
}

Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, int order) {
  Eigen::MatrixXd s(order, order);
  Eigen::Index k = 0;
  for (int j = 0; j < order; ++j) {
    s(j, j) = v[k++];
    for (int i = j + 1; i < order; ++i) {
      s(i, j) = v[k++] / kSqrt2;
      s(j, i) = s(i, j);
    }
  }
  return s;
}

namespace {

void project_soc(Eigen::Ref<Eigen::VectorXd> v) {
  const double t = v[0];
  const double nx = v.tail(v.size() - 1).norm();
  if (nx <= t) return;
  if (nx <= -t) {
    v.setZero();
    return;
  }
  const double a = 0.5 * (t + nx);
  v[0] = a;
  v.tail(v.size() - 1) *= a / nx;
}

}  // namespace

void project_onto_cone(const Cone& cone, Eigen::Ref<Eigen::VectorXd> v) {
  switch (cone.kind) {
    case ConeKind::Zero: v.setZero(); break;
    case ConeKind::NonNegative: v = v.cwiseMax(0.0); break;
    case ConeKind::SecondOrder: project_soc(v); break;
    case ConeKind::Psd: detail::PsdProjector(cone.size).project(v); break;
  }
}

void project_onto_dual_cone(const Cone& cone, Eigen::Ref<Eigen::VectorXd> v) {
  if (cone.kind == ConeKind::Zero) return;
  project_onto_cone(cone, v);
}

Residuals kkt_residuals(const ConicProgram& p, const ConicSolution& sol) {
  if (sol.x.size() != p.num_vars() || sol.y.size() != p.num_rows() || sol.s.size() != p.num_rows()) {
    throw InvalidInput("kkt_residuals: solution dimensions do not match the program");
  }
  const Eigen::VectorXd ax = p.A * sol.x;
  const Eigen::VectorXd aty = p.A.transpose() * sol.y;
  const double cx = p.c.dot(sol.x);
  const double by = p.b.dot(sol.y);
  Residuals r;
  r.primal = inf_norm(ax + sol.s - p.b);
  r.primal_scale = std::max({inf_norm(ax), inf_norm(sol.s), inf_norm(p.b)});
  r.dual = inf_norm(aty + p.c);
  r.dual_scale = std::max(inf_norm(aty), inf_norm(p.c));
  r.gap = std::abs(cx + by);
  r.gap_scale = std::max(std::abs(cx), std::abs(by));
  return r;
}


struct Solver::Impl {
  const ConicProgram& prog;
  SolverSettings set;
  std::unique_ptr<detail::AdmmEngine> admm;

  Impl(const ConicProgram& p, SolverSettings s) : prog(p), set(s) {
    set.validate();
    prog.validate();
    if (set.algorithm == Algorithm::OperatorSplitting) admm = std::make_unique<detail::AdmmEngine>(prog, set);
  }
};

Solver::Solver(const ConicProgram& program, SolverSettings settings)
    : impl_(std::make_unique<Impl>(program, settings)) {}
Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

ConicSolution Solver::solve() {
  if (impl_->admm) return impl_->admm->run();
  return detail::solve_interior_point(impl_->prog, impl_->set);
}

ConicSolution solve(const ConicProgram& program, const SolverSettings& settings) {
  Solver solver(program, settings);
  return solver.solve();
}

void write_program(std::ostream& out, const ConicProgram& p) {
  p.validate();
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  out << "# psl-forge conic program v1\n";
  out << "vars " << p.num_vars() << "\nrows " << p.num_rows() << "\ncones " << p.cones.size() << '\n';
  for (const auto& k : p.cones) out << to_string(k.kind) << ' ' << k.size << '\n';
  out << "c\n";
  for (int j = 0; j < p.num_vars(); ++j) out << p.c[j] << '\n';
  out << "b\n";
  for (int i = 0; i < p.num_rows(); ++i) out << p.b[i] << '\n';
  out << "A dense\n";
  const Eigen::MatrixXd dense(p.A);
  for (int i = 0; i < p.num_rows(); ++i) {
    for (int j = 0; j < p.num_vars(); ++j) out << (j ? " " : "") << dense(i, j);
    out << '\n';
  }
  out.precision(old_precision);
}

ConicProgram read_program(std::istream& in) {
  auto fail = [](const std::string& what) { throw InvalidInput("conic program dump: " + what); };
  std::string line;
  if (!std::getline(in, line) || line.rfind("# psl-forge conic program", 0) != 0) fail("missing header");
  std::string key;
  int vars = 0, rows = 0;
  std::size_t ncones = 0;
  if (!(in >> key >> vars) || key != "vars") fail("expected 'vars'");
  if (!(in >> key >> rows) || key != "rows") fail("expected 'rows'");
  if (!(in >> key >> ncones) || key != "cones") fail("expected 'cones'");
  ConicProgram p;
  for (std::size_t i = 0; i < ncones; ++i) {
    std::string kind;
    int size = 0;
    if (!(in >> kind >> size)) fail("truncated cone list");
    if (kind == "zero") p.cones.push_back(Cone::zero(size));
    else if (kind == "nonneg") p.cones.push_back(Cone::nonneg(size));
    else if (kind == "soc") p.cones.push_back(Cone::soc(size));
    else if (kind == "psd") p.cones.push_back(Cone::psd(size));
    else fail("unknown cone '" + kind + "'");
  }
  if (!(in >> key) || key != "c") fail("expected 'c'");
  p.c.resize(vars);
  for (int j = 0; j < vars; ++j) if (!(in >> p.c[j])) fail("truncated c");
  if (!(in >> key) || key != "b") fail("expected 'b'");
  p.b.resize(rows);
  for (int i = 0; i < rows; ++i) if (!(in >> p.b[i])) fail("truncated b");
  if (!(in >> key) || key != "A" || !(in >> key) || key != "dense") fail("expected 'A dense'");
  std::vector<Eigen::Triplet<double>> t;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < vars; ++c) {
      double val = 0;
      if (!(in >> val)) fail("truncated A");
      if (val != 0.0) t.emplace_back(r, c, val);
    }
  }
  p.A.resize(rows, vars);
  p.A.setFromTriplets(t.begin(), t.end());
  p.A.makeCompressed();
  p.validate();
  return p;
}

}  // namespace pslforge::conic
