#include "pslforge/spectral_mask.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pslforge/errors.hpp"

namespace pslforge {

namespace {

void check_intervals(const std::vector<FrequencyInterval>& intervals) {
  for (const auto& iv : intervals) {
    if (!(iv.lo >= 0.0 && iv.lo < iv.hi && iv.hi <= 1.0)) {
      throw InvalidInput("spectral mask: interval [" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) +
                         "] must satisfy 0 <= lo < hi <= 1");
    }
  }
  auto sorted = intervals;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].lo < sorted[i - 1].hi) throw InvalidInput("spectral mask: stop intervals overlap");
  }
}

}  // namespace

std::vector<int> allocate_grid_points(const std::vector<FrequencyInterval>& intervals, int grid_size) {
  std::vector<int> counts(intervals.size(), 0);
  if (intervals.empty() || grid_size <= 0) return counts;
  double total = 0.0;
  for (const auto& iv : intervals) total += iv.width();
  int used = 0;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    counts[i] = static_cast<int>(std::floor(grid_size * intervals[i].width() / total));
    used += counts[i];
  }
  const auto widest = std::distance(
      intervals.begin(),
      std::max_element(intervals.begin(), intervals.end(),
                       [](const auto& a, const auto& b) { return a.width() < b.width(); }));
  counts[static_cast<std::size_t>(widest)] += grid_size - used;
  return counts;
}

SpectralMask SpectralMask::uniform(std::vector<FrequencyInterval> intervals, int grid_size, double cap,
                                   GridRule rule) {
  return with_caps(std::move(intervals), grid_size,
                   std::vector<double>(static_cast<std::size_t>(std::max(grid_size, 0)), cap), rule);
}

SpectralMask SpectralMask::with_caps(std::vector<FrequencyInterval> intervals, int grid_size,
                                     std::vector<double> caps, GridRule rule) {
  if (grid_size < 0) throw InvalidInput("spectral mask: grid size must be nonnegative");
  if (static_cast<int>(caps.size()) != grid_size) {
    throw InvalidInput("spectral mask: expected " + std::to_string(grid_size) + " caps, got " +
                       std::to_string(caps.size()));
  }
  for (double c : caps) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidInput("spectral mask: caps must be positive and finite");
  }
  check_intervals(intervals);
  if (grid_size > 0 && intervals.empty()) throw InvalidInput("spectral mask: grid points need a stop interval");

  SpectralMask mask;
  mask.rule_ = rule;
  const auto counts = allocate_grid_points(intervals, grid_size);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& iv = intervals[i];
    const int k = counts[i];
    for (int p = 0; p < k; ++p) {
      double f = iv.lo;
      if (rule == GridRule::Inclusive) {
        if (k > 1) f = iv.lo + iv.width() * p / (k - 1);
      } else {
        f = iv.lo + iv.width() / k * p;
      }
      mask.grid_.push_back(f);
    }
  }
  mask.intervals_ = std::move(intervals);
  mask.caps_ = std::move(caps);
  return mask;
}

bool SpectralMask::in_stopband(double f) const {
  return std::any_of(intervals_.begin(), intervals_.end(), [f](const auto& iv) { return iv.contains(f); });
}

double SpectralMask::stop_width() const {
  return std::accumulate(intervals_.begin(), intervals_.end(), 0.0,
                         [](double acc, const auto& iv) { return acc + iv.width(); });
}

}  // namespace pslforge
