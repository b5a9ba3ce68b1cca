#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace pslforge::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitRankFailure = 2,
  kExitIterCap = 3,
  kExitFailure = 4,
};

/// Where a run configuration comes from: a preset or a file, then overrides.
struct ConfigSource {
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> config_path;
  std::vector<std::string> overrides;
  std::optional<std::filesystem::path> out_dir;
};

RunConfig resolve_config(const ConfigSource& src);

struct ReportOptions {
  std::filesystem::path sequence_path;
  std::optional<std::filesystem::path> bound_json;  // reuse a stored bound
  bool skip_bound = false;
  bool ambiguity = false;
};

int cmd_design(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bound(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_report(const RunConfig& cfg, const ReportOptions& opts, std::ostream& out, std::ostream& err);
/// Writes a commented configuration file (preset text or the resolved config).
int cmd_init(const ConfigSource& src, const std::optional<std::filesystem::path>& target, std::ostream& out);

/// Worker count: PSL_FORGE_THREADS when set, else the hardware concurrency.
int sweep_threads();

/// Runs `command` ("design" or "bound") for every entry of a sweep file. Each
/// non-comment line is "<name> [preset=<p>] [config=<path>] [section.key=value ...]";
/// entries inherit `base` and write to <out>/<name>. Returns the largest exit code.
int run_sweep(const std::string& command, const std::filesystem::path& sweep_file, const ConfigSource& base,
              int threads, std::ostream& out, std::ostream& err);

}  // namespace pslforge::app
