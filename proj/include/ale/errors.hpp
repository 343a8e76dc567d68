#pragma once

#include <stdexcept>
#include <string>

namespace ale {

// Caller broke a documented precondition (bad n, k, interval, ...).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A floating quantity left the representable range.
struct RangeError : std::range_error {
  using std::range_error::range_error;
};

// Quadrature, root finding or a closure iteration did not converge.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

}  // namespace ale
