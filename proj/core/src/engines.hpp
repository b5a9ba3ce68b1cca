#pragma once

#include <memory>

#include "pslforge/conic.hpp"

namespace pslforge::conic::detail {

inline double inf_norm(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

// Douglas-Rachford splitting on the homogeneous self-dual embedding.
// Construction equilibrates the data and factors the KKT matrix.
class AdmmEngine {
 public:
  AdmmEngine(const ConicProgram& program, const SolverSettings& settings);
  ~AdmmEngine();
  AdmmEngine(AdmmEngine&&) noexcept;
  AdmmEngine& operator=(AdmmEngine&&) noexcept;

  ConicSolution run();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

// Primal-dual interior-point method on the homogeneous self-dual embedding.
ConicSolution solve_interior_point(const ConicProgram& program, const SolverSettings& settings);

}  // namespace pslforge::conic::detail
