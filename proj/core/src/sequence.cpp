#include "pslforge/sequence.hpp"

#include <cmath>
#include <string>

#include "pslforge/errors.hpp"

namespace pslforge {

Sequence::Sequence(Eigen::VectorXcd values) : values_(std::move(values)) {
  if (values_.size() < 2) throw InvalidInput("Sequence: length must be at least 2");
  if (!values_.allFinite()) throw InvalidInput("Sequence: non-finite entry");
}

Sequence::Sequence(std::span<const cplx> values)
    : Sequence(Eigen::Map<const Eigen::VectorXcd>(values.data(), static_cast<Eigen::Index>(values.size()))) {}

bool Sequence::is_unimodular(double tol) const {
  for (Eigen::Index n = 0; n < values_.size(); ++n) {
    if (std::abs(std::abs(values_[n]) - 1.0) > tol) return false;
  }
  return true;
}

std::vector<double> Sequence::phases() const {
  std::vector<double> out(static_cast<std::size_t>(values_.size()));
  for (Eigen::Index n = 0; n < values_.size(); ++n) out[static_cast<std::size_t>(n)] = std::arg(values_[n]);
  return out;
}

Sequence sequence_from_phases(std::span<const double> phases) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(phases.size()));
  for (std::size_t n = 0; n < phases.size(); ++n) {
    if (!std::isfinite(phases[n])) {
      throw InvalidInput("sequence_from_phases: phase " + std::to_string(n) + " is not finite");
    }
    v[static_cast<Eigen::Index>(n)] = std::polar(1.0, phases[n]);
  }
  return Sequence(std::move(v));
}

Sequence project_to_unimodular(const Sequence& x) {
  Eigen::VectorXcd v = x.values();
  for (Eigen::Index n = 0; n < v.size(); ++n) {
    const double mag = std::abs(v[n]);
    if (mag == 0.0) throw DegenerateInput("project_to_unimodular: entry " + std::to_string(n) + " is zero");
    v[n] /= mag;
  }
  return Sequence(std::move(v));
}

cplx CorrelationProfile::at(int lag) const {
  const int a = lag < 0 ? -lag : lag;
  if (a >= size()) throw InvalidInput("CorrelationProfile: lag " + std::to_string(lag) + " out of range");
  const cplx r = lags[static_cast<std::size_t>(a)];
  return lag < 0 ? std::conj(r) : r;
}

}  // namespace pslforge
