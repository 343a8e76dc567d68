#pragma once

#include <gmpxx.h>

#include <string>

namespace ale {

using Q = mpq_class;

// Exact rational equal to the shortest decimal that round-trips x,
// so 0.1 becomes 1/10 rather than the nearest binary fraction.
Q q_from_decimal(double x);
Q q_parse(const std::string& s);  // "3/7", "-2", "0.125", "1e-3"

// a/b in lowest terms (mpq_class(a, b) alone does not canonicalize).
inline Q qfrac(long a, long b) {
  Q q(a, b);
  q.canonicalize();
  return q;
}

inline double to_double(const Q& q) { return q.get_d(); }
std::string to_string(const Q& q);

inline bool is_integer(const Q& q) { return q.get_den() == 1; }

}  // namespace ale
