#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pslforge/errors.hpp"

namespace pslforge::conic::detail {

extern "C" void dsyevr_(const char* jobz, const char* range, const char* uplo, const int* n, double* a,
                        const int* lda, const double* vl, const double* vu, const int* il, const int* iu,
                        const double* abstol, int* m, double* w, double* z, const int* ldz, int* isuppz,
                        double* work, const int* lwork, int* iwork, const int* liwork, int* info, std::size_t,
                        std::size_t, std::size_t);

inline constexpr double kSqrt2 = 1.4142135623730951;

// Partial symmetric eigendecomposition through LAPACK dsyevr with cached workspace.
class SymmetricEigen {
 public:
  explicit SymmetricEigen(int order) : order_(order), mat_(order, order), z_(order, order), w_(order) {
    isuppz_.resize(2 * static_cast<std::size_t>(order));
    double wq = 0.0;
    int iwq = 0;
    const char jobz = 'V', range = 'A', uplo = 'L';
    const int il = 1, iu = order_, lwork = -1, liwork = -1;
    const double vl = 0.0, vu = 1.0, abstol = 0.0;
    int m = 0, info = 0;
    dsyevr_(&jobz, &range, &uplo, &order_, mat_.data(), &order_, &vl, &vu, &il, &iu, &abstol, &m, w_.data(),
            z_.data(), &order_, isuppz_.data(), &wq, &lwork, &iwq, &liwork, &info, 1, 1, 1);
    work_.resize(static_cast<std::size_t>(wq));
    iwork_.resize(static_cast<std::size_t>(iwq));
  }

  [[nodiscard]] int order() const { return order_; }
  // Input matrix; only the lower triangle is read and it is overwritten by each call.
  Eigen::MatrixXd& matrix() { return mat_; }

  // Eigenpairs with eigenvalue in (vl, vu]; returns their count.
  int by_value(double vl, double vu, bool vectors = true) { return run(vectors ? 'V' : 'N', 'V', vl, vu, 1, 1); }
  // Eigenpairs il..iu (1-based, ascending).
  int by_index(int il, int iu, bool vectors = true) { return run(vectors ? 'V' : 'N', 'I', 0.0, 0.0, il, iu); }

  [[nodiscard]] const Eigen::VectorXd& values() const { return w_; }
  [[nodiscard]] const Eigen::MatrixXd& vectors() const { return z_; }

 private:
  int run(char jobz, char range, double vl, double vu, int il, int iu) {
    const char uplo = 'L';
    const double abstol = 0.0;
    const int lwork = static_cast<int>(work_.size());
    const int liwork = static_cast<int>(iwork_.size());
    int m = 0, info = 0;
    dsyevr_(&jobz, &range, &uplo, &order_, mat_.data(), &order_, &vl, &vu, &il, &iu, &abstol, &m, w_.data(),
            z_.data(), &order_, isuppz_.data(), work_.data(), &lwork, iwork_.data(), &liwork, &info, 1, 1, 1);
    if (info != 0) throw NumericFailure("symmetric eigensolver: dsyevr failed (info " + std::to_string(info) + ")");
    return m;
  }

  int order_;
  Eigen::MatrixXd mat_, z_;
  Eigen::VectorXd w_;
  std::vector<int> isuppz_;
  std::vector<double> work_;
  std::vector<int> iwork_;
};

// Projection onto the PSD cone in svec coordinates. Only the eigenpairs on the
// side expected to be smaller are computed.
class PsdProjector {
 public:
  explicit PsdProjector(int order) : eig_(order) {}

  // Returns the number of positive eigenvalues.
  int project(Eigen::Ref<Eigen::VectorXd> v) {
    const int order = eig_.order();
    if (order == 1) {
      v[0] = std::max(v[0], 0.0);
      return v[0] > 0 ? 1 : 0;
    }
    auto& mat = eig_.matrix();
    Eigen::Index idx = 0;
    for (int j = 0; j < order; ++j) {
      mat(j, j) = v[idx++];
      for (int i = j + 1; i < order; ++i) mat(i, j) = v[idx++] / kSqrt2;
    }
    const Eigen::MatrixXd original = mat.selfadjointView<Eigen::Lower>();
    const double huge = std::numeric_limits<double>::max();
    const bool positive_side = last_positive_ < 0 || 2 * last_positive_ <= order;
    const int found = positive_side ? eig_.by_value(0.0, huge) : eig_.by_value(-huge, 0.0);
    const auto& w = eig_.values();
    const auto& z = eig_.vectors();
    Eigen::MatrixXd out;
    if (positive_side) {
      out = Eigen::MatrixXd::Zero(order, order);
      if (found > 0) {
        const Eigen::MatrixXd sc = z.leftCols(found) * w.head(found).cwiseSqrt().asDiagonal();
        out.selfadjointView<Eigen::Lower>().rankUpdate(sc);
      }
      last_positive_ = found;
    } else {
      out = original;
      if (found > 0) {
        const Eigen::MatrixXd sc = z.leftCols(found) * (-w.head(found)).cwiseSqrt().asDiagonal();
        out.selfadjointView<Eigen::Lower>().rankUpdate(sc);
      }
      last_positive_ = order - found;
    }
    idx = 0;
    for (int j = 0; j < order; ++j) {
      v[idx++] = out(j, j);
      for (int i = j + 1; i < order; ++i) v[idx++] = kSqrt2 * out(i, j);
    }
    return last_positive_;
  }

 private:
  SymmetricEigen eig_;
  int last_positive_ = -1;
};

}  // namespace pslforge::conic::detail
