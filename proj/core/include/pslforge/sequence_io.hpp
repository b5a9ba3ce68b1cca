#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "pslforge/sequence.hpp"

namespace pslforge {

/// Writes the header "# psl-forge sequence v1, N=<N>" followed by one
/// "index,phase,re,im" line per element, 17 significant digits.
void write_sequence(std::ostream& out, const Sequence& x);

/// Accepts rows "index,phase", "index,,re,im" or "index,phase,re,im". When both
/// forms are present they must agree to 1e-9 and re/im wins. Throws
/// InvalidInput with the offending line number.
Sequence read_sequence(std::istream& in, const std::string& source = "sequence");

void save_sequence(const std::filesystem::path& path, const Sequence& x);
Sequence load_sequence(const std::filesystem::path& path);

}  // namespace pslforge
