#include "pslforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "pslforge/errors.hpp"

namespace pslforge {

namespace {

int next_pow2(int v) {
  int p = 1;
  while (p < v) p <<= 1;
  return p;
}

std::vector<int> resolve_lags(const std::vector<int>& lags, int n) {
  if (!lags.empty()) {
    for (int l : lags) {
      if (l < 1 || l >= n) throw InvalidInput("lag " + std::to_string(l) + " outside 1..N-1");
    }
    return lags;
  }
  std::vector<int> all(static_cast<std::size_t>(n - 1));
  for (int l = 1; l < n; ++l) all[static_cast<std::size_t>(l - 1)] = l;
  return all;
}

}  // namespace

CorrelationProfile autocorrelation(const Sequence& x) {
  const int n = x.size();
  const int len = next_pow2(2 * n);
  std::vector<cplx> padded(static_cast<std::size_t>(len), cplx(0.0));
  for (int i = 0; i < n; ++i) padded[static_cast<std::size_t>(i)] = x[i];
  Eigen::FFT<double> fft;
  std::vector<cplx> spec;
  fft.fwd(spec, padded);
  for (auto& s : spec) s = std::norm(s);
  std::vector<cplx> r;
  fft.inv(r, spec);
  // inv(|X|^2)[l] = sum_n x_{n+l} conj(x_n) = r_l for 0 <= l < N.
  CorrelationProfile out;
  out.lags.assign(r.begin(), r.begin() + n);
  out.lags[0] = cplx(out.lags[0].real(), 0.0);
  return out;
}

double psl(const Sequence& x, const std::vector<int>& lags) {
  const auto r = autocorrelation(x);
  double peak = 0.0;
  for (int l : resolve_lags(lags, x.size())) peak = std::max(peak, std::abs(r.lags[static_cast<std::size_t>(l)]));
  return peak;
}

double npsl_db(const Sequence& x, const std::vector<int>& lags) {
  return 20.0 * std::log10(psl(x, lags) / x.size());
}

SpectralReport spectral_report(const Sequence& x, const SpectralMask& mask, int samples) {
  if (samples < 2) throw InvalidInput("spectral_report: need at least 2 samples");
  SpectralReport rep;
  rep.samples = samples;
  rep.freqs.resize(static_cast<std::size_t>(samples));
  rep.energy.resize(static_cast<std::size_t>(samples));
  double pass_sum = 0.0;
  int pass_count = 0;
  double stop_max = 0.0;
  bool any_stop = false;
  for (int k = 0; k < samples; ++k) {
    const double f = static_cast<double>(k) / samples;
    const double e = std::norm(dtft_at(x, f));
    rep.freqs[static_cast<std::size_t>(k)] = f;
    rep.energy[static_cast<std::size_t>(k)] = e;
    if (mask.in_stopband(f)) {
      stop_max = any_stop ? std::max(stop_max, e) : e;
      any_stop = true;
    } else {
      pass_sum += e;
      ++pass_count;
    }
  }
  if (pass_count == 0) throw InvalidInput("spectral_report: the stopband covers every sample (no passband)");
  rep.e_apb = pass_sum / pass_count;
  rep.e_msb = stop_max;
  rep.a_stop_db = any_stop ? 10.0 * std::log10(rep.e_apb / rep.e_msb) : 0.0;
  rep.normalized_energy.resize(rep.energy.size());
  std::transform(rep.energy.begin(), rep.energy.end(), rep.normalized_energy.begin(),
                 [&](double e) { return e / rep.e_apb; });
  return rep;
}

double max_grid_energy(const Sequence& x, const SpectralMask& mask) {
  double m = 0.0;
  for (double f : mask.grid()) m = std::max(m, std::norm(dtft_at(x, f)));
  return m;
}

double max_grid_violation_ratio(const Sequence& x, const SpectralMask& mask) {
  double m = 0.0;
  for (int i = 0; i < mask.grid_size(); ++i) {
    const double e = std::norm(dtft_at(x, mask.grid()[static_cast<std::size_t>(i)]));
    m = std::max(m, e / mask.caps()[static_cast<std::size_t>(i)]);
  }
  return m;
}

double choose_umax(double a_db, int n, UmaxMode mode, std::optional<double> pass_width) {
  if (!(a_db >= 0.0)) throw InvalidInput("choose_umax: attenuation must be nonnegative");
  if (n < 1) throw InvalidInput("choose_umax: N must be positive");
  const double guarantee = n / std::pow(10.0, 0.1 * a_db);
  if (mode == UmaxMode::Guarantee) return guarantee;
  if (!pass_width) throw InvalidInput("choose_umax: approximate mode needs the passband width");
  if (!(*pass_width > 0.0 && *pass_width <= 1.0)) throw InvalidInput("choose_umax: passband width must lie in (0, 1]");
  return guarantee / *pass_width;
}

cplx ambiguity_function(const Sequence& x, int lag, int doppler_index, int doppler_bins) {
  const int n = x.size();
  if (std::abs(lag) > n - 1) throw InvalidInput("ambiguity_function: |lag| must be <= N-1");
  if (doppler_bins < 1 || doppler_index < 0 || doppler_index >= doppler_bins) {
    throw InvalidInput("ambiguity_function: doppler index must lie in [0, M)");
  }
  const int l = std::abs(lag);
  const double nu = 2.0 * std::numbers::pi * doppler_index / doppler_bins;
  cplx acc = 0.0;
  for (int i = l; i < n; ++i) acc += x[i] * std::conj(x[i - l]) * std::polar(1.0, nu * i);
  return lag < 0 ? std::conj(acc) : acc;
}

}  // namespace pslforge
