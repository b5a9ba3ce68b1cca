#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "pslforge/design_config.hpp"

namespace pslforge::app {

/// Bad command line or configuration; maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ConfigTree = boost::property_tree::ptree;

/// A parsed run configuration. `canonical` is the normalized INI text that
/// `digest` is computed from ([output] excluded).
struct RunConfig {
  DesignConfig design;
  std::string preset;  // empty unless derived from a named preset
  std::filesystem::path output_dir = "psl-forge-out";
  int spectrum_samples = 500;
  int doppler_bins = 64;
  std::string canonical;
  std::string digest;
};

/// Names accepted by --preset.
std::vector<std::string> preset_names();

/// INI text for a preset; throws UsageError for unknown names.
std::string preset_text(const std::string& name);

ConfigTree parse_config_text(const std::string& text, const std::string& source);
ConfigTree load_config_tree(const std::filesystem::path& path);

/// Applies "section.key=value". Throws UsageError on malformed assignments.
void apply_override(ConfigTree& tree, const std::string& assignment);

/// Converts and validates; errors name the offending section.key.
RunConfig to_run_config(const ConfigTree& tree, const std::string& source);

/// Normalized INI text of every field, fixed order, 17 significant digits.
std::string canonical_ini(const RunConfig& cfg, bool with_output = true);

/// 64-bit FNV-1a of the text as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace pslforge::app
