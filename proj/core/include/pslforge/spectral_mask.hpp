#pragma once

#include <vector>

namespace pslforge {

struct FrequencyInterval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] bool contains(double f) const { return f >= lo && f <= hi; }
};

// How grid points are laid out inside one stop interval holding k points.
enum class GridRule {
  Inclusive,  // f = lo + (hi - lo) * i / (k - 1): both endpoints sampled
  HalfOpen,   // f = lo + (hi - lo) * i / k: right endpoint excluded
};

/// Stopband description: normalized-frequency intervals in [0, 1], the
/// constraint grid laid over them and one energy cap per grid point.
/// An empty grid means "no spectral constraint".
class SpectralMask {
 public:
  SpectralMask() = default;

  /// Same cap at every grid point.
  static SpectralMask uniform(std::vector<FrequencyInterval> intervals, int grid_size, double cap,
                              GridRule rule = GridRule::Inclusive);

  /// One cap per grid point (caps.size() == grid_size).
  static SpectralMask with_caps(std::vector<FrequencyInterval> intervals, int grid_size,
                                std::vector<double> caps, GridRule rule = GridRule::Inclusive);

  static SpectralMask none() { return {}; }

  [[nodiscard]] const std::vector<FrequencyInterval>& intervals() const { return intervals_; }
  [[nodiscard]] const std::vector<double>& grid() const { return grid_; }
  [[nodiscard]] const std::vector<double>& caps() const { return caps_; }
  [[nodiscard]] int grid_size() const { return static_cast<int>(grid_.size()); }
  [[nodiscard]] GridRule rule() const { return rule_; }
  [[nodiscard]] bool empty() const { return grid_.empty(); }

  [[nodiscard]] bool in_stopband(double f) const;
  /// Total width of the stop intervals (assumed disjoint).
  [[nodiscard]] double stop_width() const;
  [[nodiscard]] double pass_width() const { return 1.0 - stop_width(); }

 private:
  std::vector<FrequencyInterval> intervals_;
  std::vector<double> grid_;
  std::vector<double> caps_;
  GridRule rule_ = GridRule::Inclusive;
};

/// Splits `grid_size` points across intervals in proportion to width; the
/// remainder goes to the widest interval.
std::vector<int> allocate_grid_points(const std::vector<FrequencyInterval>& intervals, int grid_size);

}  // namespace pslforge
