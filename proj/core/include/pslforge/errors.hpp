#pragma once

#include <stdexcept>
#include <string>

namespace pslforge {

// Bad arguments: wrong sizes, non-finite values, out-of-range parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inputs that are well-formed but cannot be processed (zero entries, zero matrix).
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A precondition on solver state was violated, e.g. an iterate that is not PSD.
class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pslforge
