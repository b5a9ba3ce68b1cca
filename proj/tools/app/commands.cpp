#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "outputs.hpp"
#include "published.hpp"
#include "pslforge/errors.hpp"
#include "pslforge/sequence_io.hpp"

namespace pslforge::app {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSequenceFile = "sequence.txt";

ConfigTree base_tree(const ConfigSource& src, std::string& source) {
  if (src.preset && src.config_path) throw UsageError("give either --preset or a config file, not both");
  if (src.preset) {
    source = "preset " + *src.preset;
    return parse_config_text(preset_text(*src.preset), source);
  }
  if (src.config_path) {
    source = src.config_path->string();
    return load_config_tree(*src.config_path);
  }
  throw UsageError("no configuration: pass a config file or --preset <name>");
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + dir.string() + ": " + ec.message());
}

int exit_code(DesignStatus status) {
  switch (status) {
    case DesignStatus::Converged: return kExitOk;
    case DesignStatus::RankFailure: return kExitRankFailure;
    case DesignStatus::IterCap: return kExitIterCap;
  }
  return kExitFailure;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_sequence_csvs(const Sequence& x, const RunConfig& cfg, const fs::path& dir, const std::string& source) {
  const CsvOrigin origin{source, cfg.digest};
  std::ostringstream corr, spec;
  write_correlation_csv(corr, x, origin);
  write_spectrum_csv(spec, spectral_report(x, cfg.design.mask, cfg.spectrum_samples), origin);
  write_text_file(dir / "correlation.csv", corr.str());
  write_text_file(dir / "spectrum.csv", spec.str());
}

std::optional<double> stored_bound_db(const fs::path& path, const RunConfig& cfg, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open bound file " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
  if (!j.contains("npsl_lb_db")) throw UsageError(path.string() + ": missing npsl_lb_db");
  if (j.value("config_digest", std::string()) != cfg.digest) {
    err << "warning: " << path.string() << " was computed for config " << j.value("config_digest", std::string("?"))
        << ", this run uses " << cfg.digest << '\n';
  }
  if (j["npsl_lb_db"].is_null()) return std::nullopt;
  return j["npsl_lb_db"].get<double>();
}

struct SweepEntry {
  std::string name;
  ConfigSource source;
};

std::vector<SweepEntry> read_sweep(const fs::path& path, const ConfigSource& base) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open sweep file " + path.string());
  static const std::regex safe_name(R"([A-Za-z0-9_.-]+)");
  std::vector<SweepEntry> entries;
  std::set<std::string> names;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string name;
    if (!(tokens >> name) || name.front() == '#') continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (!std::regex_match(name, safe_name)) throw UsageError(where + "run name '" + name + "' is not a plain file name");
    if (!names.insert(name).second) throw UsageError(where + "duplicate run name '" + name + "'");
    SweepEntry e{name, base};
    e.source.out_dir.reset();
    std::string tok;
    while (tokens >> tok) {
      if (tok.rfind("preset=", 0) == 0) {
        e.source.preset = tok.substr(7);
        e.source.config_path.reset();
      } else if (tok.rfind("config=", 0) == 0) {
        e.source.config_path = fs::path(tok.substr(7));
        e.source.preset.reset();
      } else if (tok.find('=') != std::string::npos) {
        e.source.overrides.push_back(tok);
      } else {
        throw UsageError(where + "unexpected token '" + tok + "'");
      }
    }
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw UsageError(path.string() + ": no runs listed");
  return entries;
}

}  // namespace

RunConfig resolve_config(const ConfigSource& src) {
  std::string source;
  ConfigTree tree = base_tree(src, source);
  for (const auto& o : src.overrides) apply_override(tree, o);
  RunConfig cfg = to_run_config(tree, source);
  if (src.out_dir) {
    cfg.output_dir = *src.out_dir;
    cfg.canonical = canonical_ini(cfg);
  }
  return cfg;
}

int cmd_design(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const DesignConfig& d = cfg.design;
  prepare_dir(cfg.output_dir);
  write_text_file(cfg.output_dir / "config.ini", cfg.canonical);

  const Sequence start = initial_sequence(d);
  err << "design: N=" << d.n << ", " << d.mask.grid_size() << " grid points, initializer " << to_string(d.initializer)
      << ", start NPSL " << std::fixed << std::setprecision(2) << npsl_db(start, d.lags()) << " dB\n";
  const auto observer = [&](const AmState& st, const AmIteration& it) {
    err << "  iteration " << st.phi << ": t=" << std::setprecision(6) << it.t << " gap=" << std::scientific
        << it.gap << std::fixed << " (" << std::setprecision(2) << it.seconds << " s)\n";
  };
  const DesignResult res = run_am(d, start, observer);

  const Sequence written = res.sequence ? *res.sequence : project_to_unimodular(*res.raw);
  save_sequence(cfg.output_dir / kSequenceFile, written);
  const Json j = design_json(res, cfg, written, kSequenceFile);
  write_text_file(cfg.output_dir / "design.json", dump(j));
  write_sequence_csvs(written, cfg, cfg.output_dir, kSequenceFile);

  out << "status: " << to_string(res.status) << '\n' << std::fixed << std::setprecision(2)
      << "npsl_db: " << j["npsl_db"].get<double>() << '\n';
  if (!j["a_stop_db"].is_null()) out << "a_stop_db: " << j["a_stop_db"].get<double>() << '\n';
  out << "iterations: " << res.state.phi << "\noutput: " << cfg.output_dir.string() << '\n';
  if (res.status != DesignStatus::Converged) {
    err << "design did not converge (" << to_string(res.status) << "); wrote the projected best iterate\n";
  }
  return exit_code(res.status);
}

int cmd_bound(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  prepare_dir(cfg.output_dir);
  err << "bound: N=" << cfg.design.n << ", " << cfg.design.mask.grid_size() << " grid points\n";
  const BoundResult res = compute_lower_bound(cfg.design);
  write_text_file(cfg.output_dir / "bound.json", dump(bound_json(res, cfg)));
  out << "npsl_lb_db: " << std::fixed << std::setprecision(2) << res.npsl_lb_db << '\n'
      << "t_lb: " << std::setprecision(6) << res.t_lb << '\n'
      << "informative: " << (res.informative() ? "yes" : "no (PSL >= 1 holds trivially)") << '\n'
      << "output: " << cfg.output_dir.string() << '\n';
  return kExitOk;
}

int cmd_report(const RunConfig& cfg, const ReportOptions& opts, std::ostream& out, std::ostream& err) {
  const DesignConfig& d = cfg.design;
  const Sequence x = load_sequence(opts.sequence_path);
  if (x.size() != d.n) {
    throw UsageError(opts.sequence_path.string() + ": sequence has N=" + std::to_string(x.size()) +
                     " but the configuration expects N=" + std::to_string(d.n));
  }
  prepare_dir(cfg.output_dir);
  const std::string source = opts.sequence_path.string();
  write_sequence_csvs(x, cfg, cfg.output_dir, source);
  if (opts.ambiguity) {
    std::ostringstream af;
    write_ambiguity_csv(af, x, cfg.doppler_bins, {source, cfg.digest});
    write_text_file(cfg.output_dir / "ambiguity.csv", af.str());
  }

  std::vector<ComparisonRow> rows;
  std::optional<double> a_stop;
  if (!d.mask.intervals().empty()) a_stop = spectral_report(x, d.mask, cfg.spectrum_samples).a_stop_db;
  rows.push_back({"this sequence", "this sequence", npsl_db(x, d.lags()), a_stop});

  const PublishedCase* published = cfg.preset.empty() ? nullptr : published_case(cfg.preset);
  if (published) {
    for (const auto& r : published->methods) rows.push_back({r.method, "paper-reported", r.npsl_db, r.a_stop_db});
  }
  if (!opts.skip_bound) {
    std::optional<double> lb;
    if (opts.bound_json) {
      lb = stored_bound_db(*opts.bound_json, cfg, err);
    } else {
      err << "report: computing the lower bound (pass --bound-json to reuse one)\n";
      const BoundResult b = compute_lower_bound(d);
      if (std::isfinite(b.npsl_lb_db)) lb = b.npsl_lb_db;
    }
    rows.push_back({"lower bound", "computed", lb, std::nullopt});
  }
  if (published) rows.push_back({"lower bound", "paper-reported", published->lower_bound_db, std::nullopt});
  rows.push_back({"trivial bound", "computed", trivial_npsl_bound_db(d.n), std::nullopt});
  if (published) rows.push_back({"trivial bound", "paper-reported", published->trivial_bound_db, std::nullopt});

  std::ostringstream csv, text;
  write_comparison_csv(csv, rows, {source, cfg.digest});
  write_comparison_text(text, rows);
  write_text_file(cfg.output_dir / "comparison.csv", csv.str());
  write_text_file(cfg.output_dir / "comparison.txt", text.str());
  out << text.str();
  return kExitOk;
}

int cmd_init(const ConfigSource& src, const std::optional<fs::path>& target, std::ostream& out) {
  std::string text;
  if (src.overrides.empty() && !src.config_path && !src.out_dir) {
    text = preset_text(src.preset.value_or("case1"));
  } else {
    ConfigSource s = src;
    if (!s.preset && !s.config_path) s.preset = "case1";
    text = "# psl-forge run configuration\n\n" + resolve_config(s).canonical;
  }
  if (target) {
    write_text_file(*target, text);
  } else {
    out << text;
  }
  return kExitOk;
}

int sweep_threads() {
  if (const char* env = std::getenv("PSL_FORGE_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw UsageError("PSL_FORGE_THREADS must be a positive integer, got '" + std::string(env) + "'");
    return static_cast<int>(v);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int run_sweep(const std::string& command, const fs::path& sweep_file, const ConfigSource& base, int threads,
              std::ostream& out, std::ostream& err) {
  if (command != "design" && command != "bound") throw UsageError("--sweep works with design or bound");
  const auto entries = read_sweep(sweep_file, base);

  std::vector<RunConfig> configs;
  for (const auto& e : entries) {
    ConfigSource s = e.source;
    RunConfig probe = resolve_config(s);
    s.out_dir = (base.out_dir ? *base.out_dir : probe.output_dir) / e.name;
    configs.push_back(resolve_config(s));
  }

  std::vector<int> codes(entries.size(), kExitFailure);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      std::ostringstream run_out, run_err;
      try {
        codes[i] = command == "design" ? cmd_design(configs[i], run_out, run_err) : cmd_bound(configs[i], run_out, run_err);
      } catch (const std::exception& ex) {
        run_err << "error: " << ex.what() << '\n';
        codes[i] = dynamic_cast<const UsageError*>(&ex) ? kExitUsage : kExitFailure;
      }
      try {
        prepare_dir(configs[i].output_dir);
        write_text_file(configs[i].output_dir / "log.txt", run_err.str() + run_out.str());
      } catch (const std::exception&) {
      }
      std::lock_guard lock(log_mutex);
      err << "sweep: " << entries[i].name << " finished with exit code " << codes[i] << '\n';
    }
  };
  const int pool = std::clamp(threads, 1, static_cast<int>(entries.size()));
  std::vector<std::jthread> workers;
  for (int t = 0; t < pool; ++t) workers.emplace_back(worker);
  workers.clear();

  std::ostringstream summary;
  summary << "name,exit_code,output\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    summary << entries[i].name << ',' << codes[i] << ',' << configs[i].output_dir.string() << '\n';
  }
  const fs::path root = base.out_dir ? *base.out_dir : configs.front().output_dir.parent_path();
  prepare_dir(root);
  write_text_file(root / "sweep.csv", summary.str());
  out << summary.str();
  return *std::max_element(codes.begin(), codes.end());
}

}  // namespace pslforge::app
