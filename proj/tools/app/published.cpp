#include "published.hpp"

namespace pslforge::app {

namespace {

std::vector<PublishedCase> build_table() {
  const std::string bounds = "lower-bound comparison table";
  auto row = [](std::string method, double npsl, std::optional<double> a_stop, std::string table) {
    return PublishedRow{std::move(method), npsl, a_stop, std::move(table)};
  };
  return {
      {"case1",
       {row("SCAN", -16.52, 17.92, "case 1 table"), row("MM-PMM", -14.67, 15.41, "case 1 table"),
        row("Proposed", -18.18, 30.24, "case 1 table")},
       -20.27, -30.10, bounds},
      {"case2",
       {row("SCAN", -17.92, 22.50, "case 2 table"), row("MM-PMM", -16.20, 7.07, "case 2 table"),
        row("Proposed", -21.16, 30.14, "case 2 table"),
        row("Golomb (no spectral constraint)", -26.32, -1.25, "unconstrained table"),
        row("POCA (no spectral constraint)", -29.99, -1.21, "unconstrained table")},
       -22.92, -40.00, bounds},
      {"case3",
       {row("SCAN", -25.08, 25.43, "case 3 table"), row("MM-PMM", -20.86, 5.95, "case 3 table"),
        row("Proposed", -26.88, 50.05, "case 3 table")},
       -32.00, -40.00, bounds},
      {"case4",
       {row("SCAN", -25.56, 20.84, "case 4 table"), row("MM-PMM", -24.58, 11.28, "case 4 table"),
        row("Proposed", -28.69, 50.70, "case 4 table")},
       -32.86, -42.14, bounds},
      {"case5",
       {row("SCAN", -18.72, 26.52, "case 5 table"), row("MM-PMM", -18.49, 15.93, "case 5 table"),
        row("Proposed", -22.40, 30.30, "case 5 table")},
       -23.95, -48.16, bounds},
  };
}

}  // namespace

const PublishedCase* published_case(std::string_view preset) {
  static const std::vector<PublishedCase> table = build_table();
  for (const auto& c : table) {
    if (c.preset == preset) return &c;
  }
  return nullptr;
}

}  // namespace pslforge::app
