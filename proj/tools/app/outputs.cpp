#include "outputs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace pslforge::app {

namespace {

constexpr double kFloorDb = -400.0;

void write_origin(std::ostream& out, const CsvOrigin& origin) {
  out << "# source=" << origin.source << ", config=" << origin.digest << '\n';
}

Json optional_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json constraint_json(const ConstraintReport& r) {
  return {{"max_modulus_error", r.max_modulus_error}, {"max_grid_violation", r.max_grid_violation}};
}

std::string format_db(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << *v;
  return os.str();
}

}  // namespace

double magnitude_db(double magnitude, int n) {
  if (!(magnitude > 0.0)) return kFloorDb;
  return std::max(20.0 * std::log10(magnitude / n), kFloorDb);
}

Json mask_json(const DesignConfig& cfg) {
  Json intervals = Json::array();
  for (const auto& iv : cfg.mask.intervals()) intervals.push_back({iv.lo, iv.hi});
  Json m = {{"intervals", intervals}, {"n_f", cfg.mask.grid_size()}};
  m["umax"] = cfg.mask.empty() ? Json(nullptr) : Json(cfg.mask.caps().front());
  m["grid_rule"] = cfg.mask.rule() == GridRule::Inclusive ? "inclusive" : "half-open";
  return m;
}

Json params_json(const DesignConfig& cfg) {
  const auto& s = cfg.solver;
  Json lags = cfg.lag_set.empty() ? Json("all") : Json(cfg.lags());
  return {{"w", cfg.w},
          {"eps_x", cfg.eps_x},
          {"eps_rank", cfg.eps_rank},
          {"phi_max", cfg.phi_max},
          {"initializer", to_string(cfg.initializer)},
          {"seed", cfg.seed},
          {"init_iters", cfg.init_iters},
          {"lag_set", lags},
          {"solver",
           {{"algorithm", conic::to_string(s.algorithm)},
            {"eps_abs", s.eps_abs},
            {"eps_rel", s.eps_rel},
            {"eps_infeas", s.eps_infeas},
            {"max_iters", s.algorithm == conic::Algorithm::InteriorPoint ? s.ipm_max_iters : s.max_iters}}}};
}

Json design_json(const DesignResult& res, const RunConfig& cfg, const Sequence& written,
                 const std::string& sequence_file) {
  const DesignConfig& d = cfg.design;
  const double p = psl(written, d.lags());
  Json j;
  j["status"] = to_string(res.status);
  j["n"] = d.n;
  j["mask"] = mask_json(d);
  j["params"] = params_json(d);
  j["npsl_db"] = npsl_db(written, d.lags());
  if (d.mask.intervals().empty()) {
    j["a_stop_db"] = nullptr;
  } else {
    j["a_stop_db"] = optional_number(spectral_report(written, d.mask, cfg.spectrum_samples).a_stop_db);
  }
  j["iterations"] = res.state.phi;
  Json trace = Json::array();
  for (const auto& it : res.trace) trace.push_back({{"t", it.t}, {"gap", it.gap}});
  j["per_iteration"] = trace;
  j["sequence_file"] = sequence_file;
  j["psl"] = p;
  j["sigma_ratio"] = res.sigma_ratio;
  j["pre_projection"] = constraint_json(res.pre_projection);
  j["post_projection"] = constraint_json(constraint_report(written, d));
  j["preset"] = cfg.preset.empty() ? Json(nullptr) : Json(cfg.preset);
  j["config_digest"] = cfg.digest;
  Json timing = {{"seconds", res.seconds}};
  Json per = Json::array();
  for (const auto& it : res.trace) per.push_back(it.seconds);
  timing["per_iteration_seconds"] = per;
  j["timing"] = timing;
  return j;
}

Json bound_json(const BoundResult& res, const RunConfig& cfg) {
  Json j;
  j["t_lb"] = res.t_lb;
  j["npsl_lb_db"] = optional_number(res.npsl_lb_db);
  j["norm_y_1"] = res.y_l1;
  j["min_eig_M"] = res.min_eigenvalue;
  j["informative"] = res.informative();
  j["config_digest"] = cfg.digest;
  j["n"] = res.n;
  j["preset"] = cfg.preset.empty() ? Json(nullptr) : Json(cfg.preset);
  j["trivial_npsl_db"] = trivial_npsl_bound_db(res.n);
  j["mask"] = mask_json(cfg.design);
  j["solver"] = {{"status", conic::to_string(res.solver_status)},
                 {"iterations", res.solver_iterations},
                 {"objective", res.solver_objective}};
  const CertificateReport cert = verify_certificate(res, cfg.design);
  j["certificate"] = {{"valid", cert.valid()},
                      {"psd", cert.psd_ok},
                      {"l1", cert.l1_ok},
                      {"mu_nonnegative", cert.mu_ok},
                      {"objective", cert.objective_ok},
                      {"objective_error", cert.objective_error}};
  Json y_re = Json::array(), y_im = Json::array();
  for (const auto& v : res.y) {
    y_re.push_back(v.real());
    y_im.push_back(v.imag());
  }
  j["multipliers"] = {{"lags", res.lags}, {"y_re", y_re}, {"y_im", y_im}, {"mu", res.mu}, {"nu", res.nu}};
  j["timing"] = {{"seconds", res.seconds}};
  return j;
}

void write_correlation_csv(std::ostream& out, const Sequence& x, const CsvOrigin& origin) {
  const CorrelationProfile r = autocorrelation(x);
  const int n = x.size();
  write_origin(out, origin);
  out << "lag,db\n" << std::setprecision(17);
  for (int l = -(n - 1); l <= n - 1; ++l) out << l << ',' << magnitude_db(std::abs(r.at(l)), n) << '\n';
}

void write_spectrum_csv(std::ostream& out, const SpectralReport& rep, const CsvOrigin& origin) {
  write_origin(out, origin);
  out << "freq,db\n" << std::setprecision(17);
  for (std::size_t k = 0; k < rep.freqs.size(); ++k) {
    const double e = rep.normalized_energy[k];
    out << rep.freqs[k] << ',' << (e > 0.0 ? 10.0 * std::log10(e) : kFloorDb) << '\n';
  }
}

void write_ambiguity_csv(std::ostream& out, const Sequence& x, int doppler_bins, const CsvOrigin& origin) {
  const CorrelationProfile r = autocorrelation(x);
  const int n = x.size();
  write_origin(out, origin);
  out << "lag,doppler,db\n" << std::setprecision(17);
  for (int l = -(n - 1); l <= n - 1; ++l) {
    for (int p = 0; p < doppler_bins; ++p) {
      // Zero-Doppler cut taken from the correlation profile.
      const double mag = p == 0 ? std::abs(r.at(l)) : std::abs(ambiguity_function(x, l, p, doppler_bins));
      out << l << ',' << static_cast<double>(p) / doppler_bins << ',' << magnitude_db(mag, n) << '\n';
    }
  }
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows, const CsvOrigin& origin) {
  write_origin(out, origin);
  out << "row,source,npsl_db,a_stop_db\n";
  for (const auto& r : rows) {
    out << '"' << r.label << "\"," << r.source << ',' << format_db(r.npsl_db) << ',' << format_db(r.a_stop_db) << '\n';
  }
}

void write_comparison_text(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  std::size_t w_label = 3, w_source = 6;
  for (const auto& r : rows) {
    w_label = std::max(w_label, r.label.size());
    w_source = std::max(w_source, r.source.size());
  }
  auto line = [&](const std::string& a, const std::string& b, const std::string& c, const std::string& d) {
    out << std::left << std::setw(static_cast<int>(w_label)) << a << "  " << std::setw(static_cast<int>(w_source)) << b
        << "  " << std::right << std::setw(9) << c << "  " << std::setw(11) << d << '\n';
  };
  line("row", "source", "NPSL (dB)", "A_stop (dB)");
  line(std::string(w_label, '-'), std::string(w_source, '-'), std::string(9, '-'), std::string(11, '-'));
  for (const auto& r : rows) line(r.label, r.source, format_db(r.npsl_db), format_db(r.a_stop_db));
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace pslforge::app
