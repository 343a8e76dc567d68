#include "ale/rational.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "ale/errors.hpp"

namespace ale {

namespace {

Q pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  Q r = e < 0 ? Q(mpz_class(1), p) : Q(p);
  r.canonicalize();
  return r;
}

Q parse_decimal(const std::string& s) {
  std::string mant = s;
  long exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    mant = s.substr(0, epos);
    exp10 = std::stol(s.substr(epos + 1));
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant = mant.substr(1);
  }
  std::string digits;
  long frac = 0;
  bool seen_dot = false;
  for (char c : mant) {
    if (c == '.') {
      if (seen_dot) throw PreconditionError("bad number: " + s);
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_dot) ++frac;
    } else {
      throw PreconditionError("bad number: " + s);
    }
  }
  if (digits.empty()) throw PreconditionError("bad number: " + s);
  Q r(mpz_class(digits, 10));
  r *= pow10(exp10 - frac);
  r.canonicalize();
  return neg ? Q(-r) : r;
}

}  // namespace

Q q_from_decimal(double x) {
  if (!std::isfinite(x)) throw PreconditionError("non-finite value has no rational form");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return parse_decimal(std::string(buf, res.ptr));
}

Q q_parse(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Q r(mpz_class(s.substr(0, slash), 10), mpz_class(s.substr(slash + 1), 10));
    if (r.get_den() == 0) throw PreconditionError("zero denominator: " + s);
    r.canonicalize();
    return r;
  }
  return parse_decimal(s);
}

std::string to_string(const Q& q) { return q.get_str(); }

}  // namespace ale
