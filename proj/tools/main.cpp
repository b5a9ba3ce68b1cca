#include <iostream>

#include <CLI11.hpp>

#include "app/commands.hpp"
#include "pslforge/errors.hpp"

namespace {

using namespace pslforge::app;

void add_config_options(CLI::App* cmd, ConfigSource& src, std::string& preset, std::string& config, std::string& out) {
  cmd->add_option("--preset", preset, "Named configuration: case1 .. case5");
  cmd->add_option("--set", src.overrides, "Override one field, section.key=value (repeatable)")->take_all();
  cmd->add_option("--out", out, "Output directory (overrides [output] directory)");
  cmd->add_option("config", config, "Run configuration file (INI)");
}

ConfigSource finish(ConfigSource src, const std::string& preset, const std::string& config, const std::string& out) {
  if (!preset.empty()) src.preset = preset;
  if (!config.empty()) src.config_path = config;
  if (!out.empty()) src.out_dir = out;
  return src;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"psl-forge: unimodular sequences with low peak sidelobes under spectral caps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "psl-forge 0.1.0");

  ConfigSource design_src, bound_src, report_src, init_src;
  std::string design_preset, design_config, design_out, design_sweep;
  std::string bound_preset, bound_config, bound_out, bound_sweep;
  std::string report_preset, report_config, report_out, report_sequence, report_bound_json;
  std::string init_preset, init_target;
  bool report_no_bound = false, report_af = false;

  auto* design = app.add_subcommand("design", "Run alternating minimization and write the sequence and reports");
  add_config_options(design, design_src, design_preset, design_config, design_out);
  design->add_option("--sweep", design_sweep, "Run every entry of a sweep file on a worker pool");

  auto* bound = app.add_subcommand("bound", "Compute the certified PSL lower bound");
  add_config_options(bound, bound_src, bound_preset, bound_config, bound_out);
  bound->add_option("--sweep", bound_sweep, "Run every entry of a sweep file on a worker pool");

  auto* report = app.add_subcommand("report", "Compare a sequence file against bounds and published numbers");
  report->add_option("sequence", report_sequence, "Sequence file")->required();
  add_config_options(report, report_src, report_preset, report_config, report_out);
  report->add_option("--bound-json", report_bound_json, "Reuse the lower bound stored in a bound.json");
  report->add_flag("--no-bound", report_no_bound, "Skip the lower-bound row");
  report->add_flag("--af", report_af, "Also write the ambiguity-function grid (ambiguity.csv)");

  auto* init = app.add_subcommand("init", "Print a configuration file to start from");
  init->add_option("--preset", init_preset, "Named configuration: case1 .. case5");
  init->add_option("--set", init_src.overrides, "Override one field, section.key=value (repeatable)")->take_all();
  init->add_option("-o,--output", init_target, "Write to this file instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (design->parsed()) {
      const auto src = finish(design_src, design_preset, design_config, design_out);
      if (!design_sweep.empty()) return run_sweep("design", design_sweep, src, sweep_threads(), std::cout, std::cerr);
      return cmd_design(resolve_config(src), std::cout, std::cerr);
    }
    if (bound->parsed()) {
      const auto src = finish(bound_src, bound_preset, bound_config, bound_out);
      if (!bound_sweep.empty()) return run_sweep("bound", bound_sweep, src, sweep_threads(), std::cout, std::cerr);
      return cmd_bound(resolve_config(src), std::cout, std::cerr);
    }
    if (report->parsed()) {
      const auto src = finish(report_src, report_preset, report_config, report_out);
      ReportOptions opts;
      opts.sequence_path = report_sequence;
      if (!report_bound_json.empty()) opts.bound_json = report_bound_json;
      opts.skip_bound = report_no_bound;
      opts.ambiguity = report_af;
      return cmd_report(resolve_config(src), opts, std::cout, std::cerr);
    }
    const auto src = finish(init_src, init_preset, "", "");
    return cmd_init(src, init_target.empty() ? std::nullopt : std::optional<std::filesystem::path>(init_target),
                    std::cout);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const pslforge::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kExitFailure;
  }
}
