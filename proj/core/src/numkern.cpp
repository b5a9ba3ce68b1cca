#include "pslforge/numkern.hpp"

#include <cmath>
#include <numbers>

#include "pslforge/errors.hpp"

namespace pslforge {

HermitianMatrix::HermitianMatrix(int n) : n_(n), packed_(static_cast<std::size_t>(n) * (n + 1) / 2) {
  if (n < 0) throw InvalidInput("HermitianMatrix: negative dimension");
}

std::size_t HermitianMatrix::index(int i, int j) const {
  // row-major upper triangle, i <= j
  const auto ii = static_cast<std::size_t>(i);
  const auto nn = static_cast<std::size_t>(n_);
  return ii * nn - ii * (ii - 1) / 2 + static_cast<std::size_t>(j - i);
}

cplx HermitianMatrix::operator()(int i, int j) const {
  return i <= j ? packed_[index(i, j)] : std::conj(packed_[index(j, i)]);
}

void HermitianMatrix::set(int i, int j, cplx value) {
  if (i == j) {
    packed_[index(i, i)] = cplx(value.real(), 0.0);
  } else if (i < j) {
    packed_[index(i, j)] = value;
  } else {
    packed_[index(j, i)] = std::conj(value);
  }
}

HermitianMatrix HermitianMatrix::from_upper(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw InvalidInput("HermitianMatrix: matrix is not square");
  HermitianMatrix h(static_cast<int>(m.rows()));
  for (int i = 0; i < h.n_; ++i) {
    for (int j = i; j < h.n_; ++j) h.set(i, j, m(i, j));
  }
  return h;
}

HermitianMatrix HermitianMatrix::hermitian_part(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw InvalidInput("HermitianMatrix: matrix is not square");
  HermitianMatrix h(static_cast<int>(m.rows()));
  for (int i = 0; i < h.n_; ++i) {
    for (int j = i; j < h.n_; ++j) h.set(i, j, 0.5 * (m(i, j) + std::conj(m(j, i))));
  }
  return h;
}

HermitianMatrix HermitianMatrix::outer(const Eigen::VectorXcd& v) {
  HermitianMatrix h(static_cast<int>(v.size()));
  for (int i = 0; i < h.n_; ++i) {
    for (int j = i; j < h.n_; ++j) h.set(i, j, v[i] * std::conj(v[j]));
  }
  return h;
}

HermitianMatrix HermitianMatrix::identity(int n) {
  HermitianMatrix h(n);
  for (int i = 0; i < n; ++i) h.set(i, i, 1.0);
  return h;
}

Eigen::MatrixXcd HermitianMatrix::dense() const {
  Eigen::MatrixXcd m(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      m(i, j) = packed_[index(i, j)];
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

double HermitianMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += packed_[index(i, i)].real();
  return t;
}

double HermitianMatrix::frobenius_norm() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) s += (i == j ? 1.0 : 2.0) * std::norm(packed_[index(i, j)]);
  }
  return std::sqrt(s);
}

EigenDecomposition eigh(const HermitianMatrix& h) {
  for (int i = 0; i < h.dim(); ++i) {
    for (int j = i; j < h.dim(); ++j) {
      const cplx z = h(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidInput("eigh: non-finite entry");
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense());
  if (es.info() != Eigen::Success) throw NumericFailure("eigh: QR iteration did not converge");
  EigenDecomposition out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

HermitianMatrix project_psd(const HermitianMatrix& h) {
  const auto ed = eigh(h);
  const Eigen::VectorXd lam = ed.values.cwiseMax(0.0);
  const Eigen::MatrixXcd p = ed.vectors * lam.asDiagonal() * ed.vectors.adjoint();
  return HermitianMatrix::hermitian_part(p);
}

std::pair<double, double> top_two_singular_values(const HermitianMatrix& h) {
  if (h.dim() < 2) throw InvalidInput("top_two_singular_values: need dimension >= 2");
  const auto ed = eigh(h);
  const double scale = std::max(1.0, ed.values.cwiseAbs().maxCoeff());
  if (ed.values[ed.values.size() - 1] < -1e-8 * scale) {
    throw InvalidInput("top_two_singular_values: matrix is not PSD");
  }
  // For PSD input singular values are |eigenvalues|; clip roundoff below zero.
  return {std::max(ed.values[0], 0.0), std::max(ed.values[1], 0.0)};
}

cplx dtft_at(const Sequence& x, double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw InvalidInput("dtft_at: frequency must lie in [0, 1]");
  cplx acc = 0.0;
  const double w = -2.0 * std::numbers::pi * f;
  for (int n = 0; n < x.size(); ++n) acc += x[n] * std::polar(1.0, w * n);
  return acc;
}

Eigen::MatrixXd real_embed(const HermitianMatrix& h) {
  const int n = h.dim();
  const Eigen::MatrixXcd m = h.dense();
  Eigen::MatrixXd z(2 * n, 2 * n);
  z.topLeftCorner(n, n) = m.real();
  z.bottomRightCorner(n, n) = m.real();
  z.bottomLeftCorner(n, n) = m.imag();
  z.topRightCorner(n, n) = -m.imag();
  return z;
}

HermitianMatrix real_unembed(const Eigen::MatrixXd& z) {
  if (z.rows() != z.cols() || z.rows() % 2 != 0) throw InvalidInput("real_unembed: need a 2n x 2n matrix");
  const auto n = z.rows() / 2;
  const Eigen::MatrixXd re = 0.5 * (z.topLeftCorner(n, n) + z.bottomRightCorner(n, n));
  const Eigen::MatrixXd im = 0.5 * (z.bottomLeftCorner(n, n) - z.topRightCorner(n, n));
  Eigen::MatrixXcd m(n, n);
  m.real() = re;
  m.imag() = im;
  return HermitianMatrix::hermitian_part(m);
}

double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidInput("trace_product: dimension mismatch");
  double t = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = 0; j < a.dim(); ++j) t += (a(i, j) * b(j, i)).real();
  }
  return t;
}

}  // namespace pslforge
