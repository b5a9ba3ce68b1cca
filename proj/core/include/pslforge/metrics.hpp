#pragma once

#include <optional>
#include <vector>

#include "pslforge/numkern.hpp"
#include "pslforge/sequence.hpp"
#include "pslforge/spectral_mask.hpp"

namespace pslforge {

inline constexpr int kDefaultSpectrumSamples = 500;

/// Aperiodic autocorrelation through a zero-padded FFT of length >= 2N.
CorrelationProfile autocorrelation(const Sequence& x);

/// max over `lags` of |r_l|. An empty lag list means all lags 1..N-1.
double psl(const Sequence& x, const std::vector<int>& lags = {});

/// max over `lags` of 20 log10(|r_l| / N). Meant for unimodular x.
double npsl_db(const Sequence& x, const std::vector<int>& lags = {});

struct SpectralReport {
  int samples = kDefaultSpectrumSamples;
  double e_apb = 0.0;      // mean |X(k/M)|^2 over passband samples
  double e_msb = 0.0;      // max |X(k/M)|^2 over stopband samples
  double a_stop_db = 0.0;  // 10 log10(e_apb / e_msb)
  std::vector<double> freqs;
  std::vector<double> energy;             // |X(k/M)|^2
  std::vector<double> normalized_energy;  // energy / e_apb
};

/// Samples |X(f)|^2 at f = k/M, k = 0..M-1, and summarizes pass/stop energies.
/// Throws InvalidInput when the stopband leaves no passband sample or M < 2.
SpectralReport spectral_report(const Sequence& x, const SpectralMask& mask,
                               int samples = kDefaultSpectrumSamples);

/// max_i |X(f_i)|^2 / cap_i over the mask grid (0 for an empty grid).
double max_grid_violation_ratio(const Sequence& x, const SpectralMask& mask);
/// max_i |X(f_i)|^2 over the mask grid.
double max_grid_energy(const Sequence& x, const SpectralMask& mask);

enum class UmaxMode { Guarantee, Approximate };

/// Cap yielding A_stop >= a_db (Guarantee: N / 10^(a_db/10)) or
/// A_stop ~= a_db (Approximate: additionally divided by the passband width).
double choose_umax(double a_db, int n, UmaxMode mode, std::optional<double> pass_width = std::nullopt);

/// Discrete ambiguity function
///   chi(l, p) = sum_{n=l}^{N-1} x_n conj(x_{n-l}) exp(j 2 pi (p / M) n),  l >= 0,
/// with chi(-l, p) = conj(chi(l, p)). The p = 0 cut is the autocorrelation.
cplx ambiguity_function(const Sequence& x, int lag, int doppler_index, int doppler_bins);

}  // namespace pslforge
