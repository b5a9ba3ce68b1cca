#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "pslforge/errors.hpp"
#include "pslforge/metrics.hpp"

namespace pslforge::app {

namespace {

struct PresetSpec {
  const char* name;
  int n;
  const char* intervals;
  int n_f;
  double umax;
  double w;
  double eps_x;
};

constexpr PresetSpec kPresets[] = {
    {"case1", 32, "0.2:0.3", 30, 0.032, 0.11, 2e-3},
    {"case2", 100, "0.2:0.3", 60, 0.1, 0.11, 2e-3},
    {"case3", 100, "0.6:0.62", 50, 0.001, 0.18, 1e-4},
    {"case4", 128, "0.6:0.62", 64, 0.00128, 0.11, 1e-4},
    {"case5", 256, "0.2:0.3", 150, 0.256, 0.11, 1e-3},
};

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"problem", {"preset", "n", "lag_set"}},
      {"mask", {"intervals", "n_f", "umax", "umax_db_mode", "a_db", "grid_rule"}},
      {"am", {"w", "eps_x", "eps_rank", "phi_max", "initializer", "seed", "init_iters"}},
      {"solver", {"algorithm", "eps_abs", "eps_rel", "eps_infeas", "max_iters"}},
      {"output", {"directory", "spectrum_samples", "doppler_bins"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

class FieldReader {
 public:
  FieldReader(const ConfigTree& tree, std::string source) : tree_(tree), source_(std::move(source)) {}

  [[nodiscard]] std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return trim(*v);
  }

  [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& what) const {
    throw UsageError(source_ + ": " + section + "." + key + ": " + what);
  }

  double real(const std::string& section, const std::string& key, double fallback) const {
    const auto v = raw(section, key);
    if (!v) return fallback;
    double out = 0.0;
    if (!parse(*v, out) || !std::isfinite(out)) fail(section, key, "expected a number, got '" + *v + "'");
    return out;
  }

  template <class Int>
  Int integer(const std::string& section, const std::string& key, Int fallback) const {
    const auto v = raw(section, key);
    if (!v) return fallback;
    Int out{};
    if (!parse(*v, out)) fail(section, key, "expected an integer, got '" + *v + "'");
    return out;
  }

  std::string text(const std::string& section, const std::string& key, const std::string& fallback) const {
    return raw(section, key).value_or(fallback);
  }

  template <class T>
  static bool parse(const std::string& s, T& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  }

 private:
  const ConfigTree& tree_;
  std::string source_;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_lag_set(const FieldReader& r, const std::string& text) {
  std::vector<int> lags;
  if (text.empty() || text == "all") return lags;
  for (const auto& item : split(text, ',')) {
    const auto dash = item.find('-', 1);
    int lo = 0, hi = 0;
    const bool ok = dash == std::string::npos
                        ? FieldReader::parse(item, lo) && (hi = lo, true)
                        : FieldReader::parse(trim(item.substr(0, dash)), lo) &&
                              FieldReader::parse(trim(item.substr(dash + 1)), hi);
    if (!ok || hi < lo) r.fail("problem", "lag_set", "bad entry '" + item + "' (use 'all' or e.g. 1-5,9)");
    for (int l = lo; l <= hi; ++l) lags.push_back(l);
  }
  return lags;
}

std::string format_lag_set(const std::vector<int>& lags) {
  if (lags.empty()) return "all";
  std::ostringstream os;
  for (std::size_t i = 0; i < lags.size();) {
    std::size_t j = i;
    while (j + 1 < lags.size() && lags[j + 1] == lags[j] + 1) ++j;
    if (i) os << ',';
    os << lags[i];
    if (j > i) os << '-' << lags[j];
    i = j + 1;
  }
  return os.str();
}

std::vector<FrequencyInterval> parse_intervals(const FieldReader& r, const std::string& text) {
  std::vector<FrequencyInterval> out;
  if (text.empty() || text == "none") return out;
  for (const auto& item : split(text, ',')) {
    const auto colon = item.find(':');
    FrequencyInterval iv;
    if (colon == std::string::npos || !FieldReader::parse(trim(item.substr(0, colon)), iv.lo) ||
        !FieldReader::parse(trim(item.substr(colon + 1)), iv.hi)) {
      r.fail("mask", "intervals", "bad interval '" + item + "' (use lo:hi, e.g. 0.2:0.3)");
    }
    out.push_back(iv);
  }
  return out;
}

std::string format_intervals(const std::vector<FrequencyInterval>& intervals) {
  if (intervals.empty()) return "none";
  std::string out;
  for (const auto& iv : intervals) out += (out.empty() ? "" : ", ") + fmt(iv.lo) + ":" + fmt(iv.hi);
  return out;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.emplace_back(p.name);
  return names;
}

std::string preset_text(const std::string& name) {
  for (const auto& p : kPresets) {
    if (name != p.name) continue;
    std::ostringstream os;
    os << "# psl-forge run configuration (preset " << p.name << ")\n\n"
       << "[problem]\npreset = " << p.name << "\nn = " << p.n << "\nlag_set = all\n\n"
       << "[mask]\nintervals = " << p.intervals << "\nn_f = " << p.n_f << "\numax = " << fmt(p.umax)
       << "\ngrid_rule = inclusive\n\n"
       << "[am]\nw = " << fmt(p.w) << "\neps_x = " << fmt(p.eps_x)
       << "\neps_rank = 1e-08\nphi_max = 50\ninitializer = cyclic\nseed = 0\ninit_iters = 200\n\n"
       << "[solver]\nalgorithm = interior-point\neps_abs = 1e-07\neps_rel = 1e-07\neps_infeas = 1e-07\n"
       << "max_iters = 100\n\n"
       << "[output]\ndirectory = psl-forge-out/" << p.name << "\nspectrum_samples = 500\ndoppler_bins = 64\n";
    return os.str();
  }
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw UsageError("unknown preset '" + name + "' (expected one of " + known + ")");
}

ConfigTree parse_config_text(const std::string& text, const std::string& source) {
  ConfigTree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw UsageError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [section, body] : tree) {
    const auto known = known_keys().find(section);
    if (known == known_keys().end()) {
      if (body.empty()) throw UsageError(source + ": key '" + section + "' outside any section");
      throw UsageError(source + ": unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!known->second.count(key)) throw UsageError(source + ": " + section + "." + key + ": unknown key");
    }
  }
  return tree;
}

ConfigTree load_config_tree(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

void apply_override(ConfigTree& tree, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const std::string path = trim(assignment.substr(0, eq));
  const auto dot = path.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot == 0 || dot + 1 == path.size()) {
    throw UsageError("--set expects section.key=value, got '" + assignment + "'");
  }
  const std::string section = path.substr(0, dot);
  const std::string key = path.substr(dot + 1);
  const auto known = known_keys().find(section);
  if (known == known_keys().end() || !known->second.count(key)) {
    throw UsageError("--set: unknown key " + path);
  }
  tree.put(ConfigTree::path_type(section + "/" + key, '/'), trim(assignment.substr(eq + 1)));
}

RunConfig to_run_config(const ConfigTree& tree, const std::string& source) {
  const FieldReader r(tree, source);
  RunConfig cfg;
  DesignConfig& d = cfg.design;

  cfg.preset = r.text("problem", "preset", "");
  if (!cfg.preset.empty()) preset_text(cfg.preset);
  d.n = r.integer("problem", "n", d.n);
  if (d.n < 2) r.fail("problem", "n", "sequence length must be at least 2");
  d.lag_set = parse_lag_set(r, r.text("problem", "lag_set", "all"));

  const auto intervals = parse_intervals(r, r.text("mask", "intervals", "none"));
  const int n_f = r.integer("mask", "n_f", 0);
  if (n_f < 0) r.fail("mask", "n_f", "must be nonnegative");
  const std::string rule_text = r.text("mask", "grid_rule", "inclusive");
  GridRule rule = GridRule::Inclusive;
  if (rule_text == "half-open") rule = GridRule::HalfOpen;
  else if (rule_text != "inclusive") r.fail("mask", "grid_rule", "expected inclusive or half-open, got '" + rule_text + "'");

  const bool has_umax = r.raw("mask", "umax").has_value();
  const bool has_adb = r.raw("mask", "a_db").has_value();
  if (has_umax && has_adb) r.fail("mask", "umax", "give either umax or a_db, not both");
  double umax = 1.0;
  if (has_umax) {
    umax = r.real("mask", "umax", 0.0);
    if (!(umax > 0.0)) r.fail("mask", "umax", "must be positive");
  } else if (has_adb) {
    const double a_db = r.real("mask", "a_db", 0.0);
    if (a_db < 0.0) r.fail("mask", "a_db", "must be nonnegative");
    const std::string mode = r.text("mask", "umax_db_mode", "guarantee");
    if (mode == "guarantee") {
      umax = choose_umax(a_db, d.n, UmaxMode::Guarantee);
    } else if (mode == "approximate") {
      double stop = 0.0;
      for (const auto& iv : intervals) stop += iv.width();
      if (!(stop < 1.0)) r.fail("mask", "umax_db_mode", "approximate mode needs a nonempty passband");
      umax = choose_umax(a_db, d.n, UmaxMode::Approximate, 1.0 - stop);
    } else {
      r.fail("mask", "umax_db_mode", "expected guarantee or approximate, got '" + mode + "'");
    }
  } else if (n_f > 0) {
    r.fail("mask", "umax", "a grid (n_f > 0) needs umax or a_db");
  }
  try {
    d.mask = SpectralMask::uniform(intervals, n_f, umax, rule);
  } catch (const InvalidInput& e) {
    r.fail("mask", "intervals", e.what());
  }

  d.w = r.real("am", "w", d.w);
  d.eps_x = r.real("am", "eps_x", d.eps_x);
  d.eps_rank = r.real("am", "eps_rank", d.eps_rank);
  d.phi_max = r.integer("am", "phi_max", d.phi_max);
  d.seed = r.integer<std::uint64_t>("am", "seed", d.seed);
  d.init_iters = r.integer("am", "init_iters", d.init_iters);
  const std::string init = r.text("am", "initializer", to_string(d.initializer));
  try {
    d.initializer = initializer_from_string(init);
  } catch (const InvalidInput& e) {
    r.fail("am", "initializer", e.what());
  }

  auto& s = d.solver;
  const std::string algo = r.text("solver", "algorithm", to_string(s.algorithm));
  if (algo == "interior-point") s.algorithm = conic::Algorithm::InteriorPoint;
  else if (algo == "operator-splitting") s.algorithm = conic::Algorithm::OperatorSplitting;
  else r.fail("solver", "algorithm", "expected interior-point or operator-splitting, got '" + algo + "'");
  s.eps_abs = r.real("solver", "eps_abs", s.eps_abs);
  s.eps_rel = r.real("solver", "eps_rel", s.eps_rel);
  s.eps_infeas = r.real("solver", "eps_infeas", s.eps_infeas);
  if (s.algorithm == conic::Algorithm::InteriorPoint) {
    s.ipm_max_iters = r.integer("solver", "max_iters", s.ipm_max_iters);
  } else {
    s.max_iters = r.integer("solver", "max_iters", s.max_iters);
  }

  cfg.output_dir = r.text("output", "directory", cfg.output_dir.string());
  cfg.spectrum_samples = r.integer("output", "spectrum_samples", cfg.spectrum_samples);
  if (cfg.spectrum_samples < 2) r.fail("output", "spectrum_samples", "must be at least 2");
  cfg.doppler_bins = r.integer("output", "doppler_bins", cfg.doppler_bins);
  if (cfg.doppler_bins < 1) r.fail("output", "doppler_bins", "must be at least 1");

  try {
    d.validate();
  } catch (const InvalidInput& e) {
    throw UsageError(source + ": " + e.what());
  }
  cfg.canonical = canonical_ini(cfg);
  cfg.digest = fnv1a_hex(canonical_ini(cfg, false));
  return cfg;
}

std::string canonical_ini(const RunConfig& cfg, bool with_output) {
  const DesignConfig& d = cfg.design;
  const auto& s = d.solver;
  std::ostringstream os;
  os << "[problem]\n";
  if (!cfg.preset.empty()) os << "preset = " << cfg.preset << '\n';
  os << "n = " << d.n << "\nlag_set = " << format_lag_set(d.lags() == full_lag_set(d.n) ? std::vector<int>{} : d.lags())
     << "\n\n[mask]\nintervals = " << format_intervals(d.mask.intervals()) << "\nn_f = " << d.mask.grid_size() << '\n';
  if (!d.mask.empty()) os << "umax = " << fmt(d.mask.caps().front()) << '\n';
  os << "grid_rule = " << (d.mask.rule() == GridRule::Inclusive ? "inclusive" : "half-open") << "\n\n"
     << "[am]\nw = " << fmt(d.w) << "\neps_x = " << fmt(d.eps_x) << "\neps_rank = " << fmt(d.eps_rank)
     << "\nphi_max = " << d.phi_max << "\ninitializer = " << to_string(d.initializer) << "\nseed = " << d.seed
     << "\ninit_iters = " << d.init_iters << "\n\n"
     << "[solver]\nalgorithm = " << conic::to_string(s.algorithm) << "\neps_abs = " << fmt(s.eps_abs)
     << "\neps_rel = " << fmt(s.eps_rel) << "\neps_infeas = " << fmt(s.eps_infeas) << "\nmax_iters = "
     << (s.algorithm == conic::Algorithm::InteriorPoint ? s.ipm_max_iters : s.max_iters) << '\n';
  if (with_output) {
    os << "\n[output]\ndirectory = " << cfg.output_dir.string() << "\nspectrum_samples = " << cfg.spectrum_samples
       << "\ndoppler_bins = " << cfg.doppler_bins << '\n';
  }
  return os.str();
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace pslforge::app
