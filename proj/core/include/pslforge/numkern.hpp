#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pslforge/sequence.hpp"

namespace pslforge {

/// Dense Hermitian matrix stored as its packed upper triangle (row-major,
/// diagonal entries real). H == H^H holds by construction.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(int n);

  /// Takes the upper triangle of `m`; the imaginary part of the diagonal is dropped.
  static HermitianMatrix from_upper(const Eigen::MatrixXcd& m);
  /// Hermitian part (m + m^H) / 2.
  static HermitianMatrix hermitian_part(const Eigen::MatrixXcd& m);
  static HermitianMatrix outer(const Eigen::VectorXcd& v);
  static HermitianMatrix identity(int n);

  [[nodiscard]] int dim() const { return n_; }
  [[nodiscard]] cplx operator()(int i, int j) const;
  /// Writes entry (i, j) and its mirror. Diagonal entries keep only the real part.
  void set(int i, int j, cplx value);

  [[nodiscard]] Eigen::MatrixXcd dense() const;
  [[nodiscard]] double trace() const;
  [[nodiscard]] double frobenius_norm() const;

 private:
  [[nodiscard]] std::size_t index(int i, int j) const;

  int n_ = 0;
  std::vector<cplx> packed_;
};

struct EigenDecomposition {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXcd vectors;  // columns match `values`
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
/// Throws NumericFailure if the QR iteration does not converge.
EigenDecomposition eigh(const HermitianMatrix& h);

/// Frobenius-nearest PSD matrix: V diag(max(lambda, 0)) V^H.
HermitianMatrix project_psd(const HermitianMatrix& h);

/// The two largest singular values (sigma0 >= sigma1). Requires a PSD input
/// within 1e-8 relative tolerance, so they coincide with the top eigenvalues.
std::pair<double, double> top_two_singular_values(const HermitianMatrix& h);

/// X(f) = sum_n x_n exp(-j 2 pi f n), 0 <= f <= 1.
cplx dtft_at(const Sequence& x, double f);

/// [[Re H, -Im H], [Im H, Re H]]: a real symmetric 2n x 2n matrix which is PSD
/// exactly when H is, with every eigenvalue of H repeated twice.
Eigen::MatrixXd real_embed(const HermitianMatrix& h);

/// Inverse of real_embed on the structured subspace. For an arbitrary symmetric
/// Z it returns the Hermitian matrix whose embedding is nearest to Z.
HermitianMatrix real_unembed(const Eigen::MatrixXd& z);

/// tr(A B) for Hermitian A, B (always real).
double trace_product(const HermitianMatrix& a, const HermitianMatrix& b);

}  // namespace pslforge
