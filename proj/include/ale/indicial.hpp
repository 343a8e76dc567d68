#pragma once

// Closed-form growth rates and exceptional sets for the vector Laplacian
// box = delta L g0 on 1-forms, its gauged variant box_t, and powers of the
// scalar Laplacian.

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "ale/poly1.hpp"
#include "ale/rational.hpp"

namespace ale {

enum class Family { typeI, typeII };
std::string to_string(Family f);
Family family_from_string(const std::string& s);

// n = 3 with k = 1, or n >= 4 with 1 <= k <= n/2 - 1.
bool in_theorem_range(int n, int k);
void require_theorem_range(int n, int k);

struct RateShift {
  Q value;
  std::string tag;  // "a+-1", "b--1", "b++1", ...
};

struct RatePair {
  Family family;
  int n = 0, j = 0;
  Q eigen;   // mu (type I) or nu (type II)
  Q center;  // alpha or beta
  Q radius;  // theta or omega; always rational for the round sphere
  Q plus, minus;
  std::vector<RateShift> shifts;

  std::complex<double> plus_c() const { return {to_double(plus), 0.0}; }
  std::complex<double> minus_c() const { return {to_double(minus), 0.0}; }
};

RatePair box_rates(int n, Family family, int j);

struct ExceptionalSet {
  int n = 0, j_max = 0, k = 0;
  std::vector<long> values;                          // sorted, unique
  std::map<long, std::vector<std::string>> provenance;
  std::vector<long> excluded;                        // Laplacian-power rule only
  long window = 0;
  bool all_integers = true;
};

ExceptionalSet box_exceptional(int n, int j_max);
ExceptionalSet laplacian_power_exceptional(int n, int k, long window = 12);

struct TaggedRoot {
  std::complex<double> value;
  std::string equation;  // "typeI", "quartic", "l-equation", "u-equation"
  bool vacuous = false;  // u-equation roots at nu = 0 carry no field (d phi = 0)
};

// Type I closed form; type II characteristic quartic of the coupled system.
std::vector<TaggedRoot> boxt_rates(int n, const Q& t, Family family, int j);
std::vector<TaggedRoot> boxt_rates(int n, double t, Family family, int j);
// Exact characteristic polynomial behind boxt_rates (type I quadratic or the
// type II determinant).
QPoly boxt_characteristic(int n, const Q& t, Family family, int j);

struct GapWitness {
  Family family;
  int j = 0;
  std::complex<double> root;
  double growth = 0;  // Re(root) - 1
  double distance = 0;
};

struct GapReport {
  int n = 0, j_max = 0;
  double t = 0;
  double gamma0 = 0;
  std::vector<GapWitness> witnesses;
};

GapReport essential_linear_gap(int n, double t, int j_max);

// prod_{i=0}^{k} ((z-2i)(z-2i+n-2) - s(s+n-2)), z the total homogeneity.
QPoly scalar_indicial_polynomial(int n, int k, int s);

}  // namespace ale
