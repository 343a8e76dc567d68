#pragma once

// Univariate polynomials with exact rational coefficients (lowest degree
// first), plus the root finding used for indicial polynomials.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "ale/rational.hpp"

namespace ale {

using cplx = std::complex<double>;

struct QPoly {
  std::vector<Q> c;

  QPoly() = default;
  explicit QPoly(std::vector<Q> coeffs) : c(std::move(coeffs)) { trim(); }
  static QPoly constant(const Q& a) { return QPoly({a}); }
  static QPoly monomial(const Q& a, int deg);

  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c.empty(); }
  const Q& lead() const { return c.back(); }
  Q coeff(int i) const { return i < static_cast<int>(c.size()) && i >= 0 ? c[i] : Q(0); }
  void trim();

  Q eval(const Q& z) const;
  cplx eval(cplx z) const;
  QPoly derivative() const;
  QPoly monic() const;
};

QPoly operator+(const QPoly& a, const QPoly& b);
QPoly operator-(const QPoly& a, const QPoly& b);
QPoly operator*(const QPoly& a, const QPoly& b);
QPoly operator*(const Q& s, const QPoly& a);
bool operator==(const QPoly& a, const QPoly& b);
// "z^2 - 1/10 z - 19/5", highest degree first.
std::string to_string(const QPoly& p);

std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b);
QPoly gcd(QPoly a, QPoly b);  // monic
// Yun's algorithm: p = lead * prod_i f_i^{m_i} with the f_i squarefree, coprime.
std::vector<std::pair<QPoly, int>> squarefree_factors(const QPoly& p);
// Lagrange interpolation through (xs[i], ys[i]); xs distinct.
QPoly interpolate(const std::vector<Q>& xs, const std::vector<Q>& ys);

// Roots of a polynomial with no repeated factor: companion eigenvalues
// followed by Newton polishing. Throws NumericError if polishing stalls.
std::vector<cplx> squarefree_roots(const QPoly& p);

struct RootWithMultiplicity {
  cplx value;
  int multiplicity;
};
// Exact multiplicities through squarefree factorization.
std::vector<RootWithMultiplicity> roots_exact(const QPoly& p);
// Companion eigenvalues of a floating polynomial (lowest degree first),
// multiplicities by clustering within `radius`.
std::vector<RootWithMultiplicity> roots_clustered(const std::vector<cplx>& coeffs, double radius);

}  // namespace ale
