#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace pslforge::conic {

enum class ConeKind { Zero, NonNegative, SecondOrder, Psd };

/// One block of the slack vector. For Psd, `size` is the matrix order d and
/// the block holds svec(S): the lower triangle, column-major, with
/// off-diagonal entries scaled by sqrt(2).
struct Cone {
  ConeKind kind = ConeKind::Zero;
  int size = 0;

  [[nodiscard]] int dim() const;

  static Cone zero(int k) { return {ConeKind::Zero, k}; }
  static Cone nonneg(int k) { return {ConeKind::NonNegative, k}; }
  static Cone soc(int k) { return {ConeKind::SecondOrder, k}; }
  static Cone psd(int order) { return {ConeKind::Psd, order}; }

  friend bool operator==(const Cone&, const Cone&) = default;
};

std::string to_string(ConeKind kind);

/// minimize c'x  subject to  A x + s = b,  s in K = cones[0] x cones[1] x ...
/// The dual is  maximize -b'y  subject to  A'y + c = 0,  y in K*.
struct ConicProgram {
  Eigen::VectorXd c;
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  std::vector<Cone> cones;

  [[nodiscard]] int num_vars() const { return static_cast<int>(c.size()); }
  [[nodiscard]] int num_rows() const { return static_cast<int>(b.size()); }
  [[nodiscard]] int cone_dim() const;

  /// Throws InvalidInput when dimensions disagree or a cone is empty.
  void validate() const;
};

/// Row-block builder: append cone blocks in order, then fill entries of the
/// rows each block owns. Entries are stored as A (slack = b - A x).
class ProgramBuilder {
 public:
  explicit ProgramBuilder(int num_vars);

  void set_cost(int var, double value);
  /// Appends a block and returns the index of its first row.
  int add_block(Cone cone);
  void add(int row, int var, double value);
  void set_rhs(int row, double value);

  [[nodiscard]] int num_rows() const { return static_cast<int>(rhs_.size()); }
  [[nodiscard]] ConicProgram build() const;

 private:
  int num_vars_;
  Eigen::VectorXd cost_;
  std::vector<double> rhs_;
  std::vector<Cone> cones_;
  std::vector<Eigen::Triplet<double>> entries_;
};

enum class Algorithm { InteriorPoint, OperatorSplitting };

std::string to_string(Algorithm algorithm);

struct SolverSettings {
  Algorithm algorithm = Algorithm::InteriorPoint;
  double eps_abs = 1e-7;
  double eps_rel = 1e-7;
  double eps_infeas = 1e-7;
  int ipm_max_iters = 100;
  int verbose = 0;  // > 0 prints progress every `verbose` iterations to stderr

  // Operator splitting only.
  int max_iters = 200000;
  double alpha = 1.6;          // over-relaxation, in (0, 2)
  bool scale = true;           // Ruiz equilibration and b/c normalization
  double rho_x = 1e-6;         // weight of the primal block in the splitting metric
  double initial_scale = 1.0;  // inverse weight of the slack block
  bool adapt_scale = false;    // rebalance the slack weight from residual ratios
  int check_interval = 10;

  /// Throws InvalidInput when a field is out of range.
  void validate() const;
};

enum class SolveStatus { Optimal, MaxIterations, InfeasibleDetected };
enum class Certificate { None, PrimalInfeasible, DualInfeasible };

std::string to_string(SolveStatus status);

/// Infinity-norm KKT residuals together with the magnitudes they are
/// compared against. A residual passes when r <= eps_abs + eps_rel * scale.
struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double primal_scale = 0.0;
  double dual_scale = 0.0;
  double gap_scale = 0.0;

  [[nodiscard]] bool within(double eps_abs, double eps_rel) const;
  /// max over the three of r / (eps_abs + eps_rel * scale); <= 1 means converged.
  [[nodiscard]] double worst_ratio(double eps_abs, double eps_rel) const;
};

struct ConicSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd s;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  Residuals residuals;
  int iterations = 0;
  SolveStatus status = SolveStatus::MaxIterations;
  Certificate certificate = Certificate::None;
  double seconds = 0.0;
};

/// Conic solver on the homogeneous self-dual embedding. The interior-point
/// algorithm refactors its normal equations every iteration; operator
/// splitting scales the data and factors its KKT matrix once at construction.
/// solve() always starts cold.
class Solver {
 public:
  Solver(const ConicProgram& program, SolverSettings settings = {});
  ~Solver();
  Solver(Solver&&) noexcept;
  Solver& operator=(Solver&&) noexcept;

  [[nodiscard]] ConicSolution solve();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ConicSolution solve(const ConicProgram& program, const SolverSettings& settings = {});

/// Recomputes residuals of `sol` from the program data alone. Throws
/// InvalidInput on dimension mismatch.
Residuals kkt_residuals(const ConicProgram& program, const ConicSolution& sol);

/// Euclidean projection of `v` onto `cone` (in place).
void project_onto_cone(const Cone& cone, Eigen::Ref<Eigen::VectorXd> v);
/// Projection onto the dual cone K* (the zero cone's dual is the whole space).
void project_onto_dual_cone(const Cone& cone, Eigen::Ref<Eigen::VectorXd> v);

Eigen::VectorXd svec(const Eigen::MatrixXd& s);
Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, int order);

/// Plain-text dump: dimensions, cones, c, b and the dense rows of A in
/// decimal with 17 significant digits.
void write_program(std::ostream& out, const ConicProgram& program);
ConicProgram read_program(std::istream& in);

}  // namespace pslforge::conic
