#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pslforge {

using cplx = std::complex<double>;

inline constexpr double kUnimodularTol = 1e-9;

/// A length-N complex sequence, N >= 2. Values are stored index-0 first and
/// the global phase is left untouched.
class Sequence {
 public:
  explicit Sequence(Eigen::VectorXcd values);
  explicit Sequence(std::span<const cplx> values);

  [[nodiscard]] int size() const { return static_cast<int>(values_.size()); }
  [[nodiscard]] const Eigen::VectorXcd& values() const { return values_; }
  [[nodiscard]] cplx operator[](int n) const { return values_[n]; }

  /// True when every entry has modulus 1 within `tol`.
  [[nodiscard]] bool is_unimodular(double tol = kUnimodularTol) const;
  [[nodiscard]] double energy() const { return values_.squaredNorm(); }

  [[nodiscard]] std::vector<double> phases() const;

  friend bool operator==(const Sequence& a, const Sequence& b) {
    return a.values_ == b.values_;
  }

 private:
  Eigen::VectorXcd values_;
};

/// x_n = exp(j * phases[n]). Throws InvalidInput on non-finite phases or N < 2.
Sequence sequence_from_phases(std::span<const double> phases);

/// x_n / |x_n|. Throws DegenerateInput if any entry is exactly zero.
Sequence project_to_unimodular(const Sequence& x);

/// Aperiodic autocorrelation lags r_0 .. r_{N-1}, with r_l = sum_{n>=l} x_n conj(x_{n-l}).
/// Negative lags follow from r_{-l} = conj(r_l).
struct CorrelationProfile {
  std::vector<cplx> lags;

  [[nodiscard]] int size() const { return static_cast<int>(lags.size()); }
  [[nodiscard]] cplx at(int lag) const;
};

}  // namespace pslforge
