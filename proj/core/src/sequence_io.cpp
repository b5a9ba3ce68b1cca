#include "pslforge/sequence_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <regex>
#include <vector>

#include "pslforge/errors.hpp"

namespace pslforge {

namespace {

constexpr double kConsistencyTol = 1e-9;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <class T>
bool parse_number(const std::string& text, T& value) {
  if (text.empty()) return false;
  const char* first = text.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

void write_sequence(std::ostream& out, const Sequence& x) {
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << "# psl-forge sequence v1, N=" << x.size() << '\n';
  out << std::setprecision(17);
  for (int n = 0; n < x.size(); ++n) {
    const cplx v = x[n];
    out << n << ',' << std::arg(v) << ',' << v.real() << ',' << v.imag() << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

Sequence read_sequence(std::istream& in, const std::string& source) {
  auto fail = [&](int line_no, const std::string& what) -> void {
    throw InvalidInput(source + ":" + std::to_string(line_no) + ": " + what);
  };
  static const std::regex header(R"(#\s*psl-forge sequence v1,\s*N\s*=\s*(\d+)\s*)");

  std::string line;
  int line_no = 1;
  if (!std::getline(in, line)) fail(line_no, "empty file");
  std::smatch m;
  const std::string head = trim(line);
  if (!std::regex_match(head, m, header)) fail(line_no, "expected header '# psl-forge sequence v1, N=<N>'");
  int n = 0;
  if (!parse_number(m[1].str(), n) || n < 2) fail(line_no, "sequence length must be at least 2");

  Eigen::VectorXcd values(n);
  int next = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split_fields(body);
    if (fields.size() != 2 && fields.size() != 4) fail(line_no, "expected 'index,phase' or 'index,phase,re,im'");
    int index = -1;
    if (!parse_number(fields[0], index)) fail(line_no, "bad index '" + fields[0] + "'");
    if (index != next) fail(line_no, "expected index " + std::to_string(next) + ", got " + fields[0]);
    if (next >= n) fail(line_no, "more than N=" + std::to_string(n) + " entries");

    double phase = 0.0;
    const bool has_phase = !fields[1].empty();
    if (has_phase && !parse_number(fields[1], phase)) fail(line_no, "bad phase '" + fields[1] + "'");
    if (fields.size() == 2) {
      if (!has_phase) fail(line_no, "missing phase");
      values[next++] = std::polar(1.0, phase);
      continue;
    }
    double re = 0.0, im = 0.0;
    if (!parse_number(fields[2], re)) fail(line_no, "bad real part '" + fields[2] + "'");
    if (!parse_number(fields[3], im)) fail(line_no, "bad imaginary part '" + fields[3] + "'");
    const cplx v(re, im);
    if (has_phase) {
      const double mag = std::abs(v);
      if (std::abs(v - std::polar(mag, phase)) > kConsistencyTol * std::max(1.0, mag)) {
        fail(line_no, "phase and re/im disagree by more than 1e-9");
      }
    }
    values[next++] = v;
  }
  if (next != n) fail(line_no, "found " + std::to_string(next) + " entries, header says N=" + std::to_string(n));
  return Sequence(std::move(values));
}

void save_sequence(const std::filesystem::path& path, const Sequence& x) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write sequence file " + path.string());
  write_sequence(out, x);
  if (!out) throw InvalidInput("failed writing sequence file " + path.string());
}

Sequence load_sequence(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open sequence file " + path.string());
  return read_sequence(in, path.string());
}

}  // namespace pslforge
