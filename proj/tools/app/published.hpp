#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pslforge::app {

inline constexpr std::string_view kPublishedTableVersion = "1";

struct PublishedRow {
  std::string method;
  double npsl_db = 0.0;
  std::optional<double> a_stop_db;
  std::string citation;
};

struct PublishedCase {
  std::string preset;
  std::vector<PublishedRow> methods;
  double lower_bound_db = 0.0;
  double trivial_bound_db = 0.0;
  std::string bound_citation;
};

/// Published comparison numbers for a preset, or nullptr.
const PublishedCase* published_case(std::string_view preset);

}  // namespace pslforge::app
