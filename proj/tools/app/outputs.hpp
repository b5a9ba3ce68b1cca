#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pslforge/am.hpp"
#include "pslforge/bound.hpp"
#include "pslforge/metrics.hpp"
#include "run_config.hpp"

namespace pslforge::app {

using Json = nlohmann::ordered_json;

/// 20 log10(|v| / n), floored at -400 dB for exact zeros.
double magnitude_db(double magnitude, int n);

Json mask_json(const DesignConfig& cfg);
Json params_json(const DesignConfig& cfg);

/// Metrics of the written sequence plus the run trace.
Json design_json(const DesignResult& res, const RunConfig& cfg, const Sequence& written,
                 const std::string& sequence_file);
Json bound_json(const BoundResult& res, const RunConfig& cfg);

/// Identifies the producer of a CSV: "# source=<file>, config=<digest>".
struct CsvOrigin {
  std::string source;
  std::string digest;
};

void write_correlation_csv(std::ostream& out, const Sequence& x, const CsvOrigin& origin);
void write_spectrum_csv(std::ostream& out, const SpectralReport& rep, const CsvOrigin& origin);
/// Grid over every lag -(N-1)..N-1 and doppler p / bins, p = 0..bins-1.
void write_ambiguity_csv(std::ostream& out, const Sequence& x, int doppler_bins, const CsvOrigin& origin);

struct ComparisonRow {
  std::string label;
  std::string source;  // "this sequence", "computed" or "paper-reported"
  std::optional<double> npsl_db;
  std::optional<double> a_stop_db;
};

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows, const CsvOrigin& origin);
void write_comparison_text(std::ostream& out, const std::vector<ComparisonRow>& rows);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace pslforge::app
