#include "ale/indicial.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ale/errors.hpp"

namespace ale {

std::string to_string(Family f) { return f == Family::typeI ? "typeI" : "typeII"; }

Family family_from_string(const std::string& s) {
  if (s == "typeI" || s == "I" || s == "1") return Family::typeI;
  if (s == "typeII" || s == "II" || s == "2") return Family::typeII;
  throw PreconditionError("unknown family '" + s + "' (typeI|typeII)");
}

bool in_theorem_range(int n, int k) {
  if (n == 3) return k == 1;
  return n >= 4 && k >= 1 && 2 * k <= n - 2;
}

void require_theorem_range(int n, int k) {
  if (!in_theorem_range(n, k))
    throw PreconditionError("(n, k) = (" + std::to_string(n) + ", " + std::to_string(k) +
                            ") outside the admissible range: k = 1 if n = 3, 1 <= k <= n/2 - 1 if n >= 4");
}

namespace {

Q half(long v) { return qfrac(v, 2); }

// Exact square root of a rational perfect square.
Q exact_sqrt(const Q& x) {
  mpz_class num = x.get_num(), den = x.get_den();
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  if (rn * rn != num || rd * rd != den) throw NumericError("expected a perfect square");
  return Q(rn, rd);
}

}  // namespace

RatePair box_rates(int n, Family family, int j) {
  require(n >= 3, "box_rates: n >= 3");
  RatePair r;
  r.family = family;
  r.n = n;
  r.j = j;
  if (family == Family::typeI) {
    require(j >= 1, "box_rates: type I needs j >= 1");
    r.eigen = Q((j + 1) * (j + n - 3));
    r.center = half(4 - n);
    r.radius = exact_sqrt(r.center * r.center + r.eigen);
    r.plus = r.center + r.radius;
    r.minus = r.center - r.radius;
    r.shifts = {{r.plus - 1, "a+-1"}, {r.minus - 1, "a--1"}};
  } else {
    require(j >= 0, "box_rates: type II needs j >= 0");
    r.eigen = Q(j * (j + n - 2));
    r.center = half(2 - n);
    r.radius = exact_sqrt(r.center * r.center + r.eigen);
    r.plus = r.center + r.radius;
    r.minus = r.center - r.radius;
    r.shifts = {{r.plus - 1, "b+-1"}, {r.minus - 1, "b--1"}, {r.plus + 1, "b++1"}, {r.minus + 1, "b-+1"}};
  }
  return r;
}

ExceptionalSet box_exceptional(int n, int j_max) {
  require(n >= 3, "box_exceptional: n >= 3");
  require(j_max >= 2, "box_exceptional: j_max >= 2");
  ExceptionalSet e;
  e.n = n;
  e.j_max = j_max;
  std::set<long> vals;
  auto add = [&](const Q& v, const std::string& tag, int j) {
    if (!is_integer(v)) {
      e.all_integers = false;
      return;
    }
    long x = v.get_num().get_si();
    vals.insert(x);
    e.provenance[x].push_back(tag + " (j=" + std::to_string(j) + ")");
  };
  for (int j = 1; j <= j_max; ++j)
    for (const auto& s : box_rates(n, Family::typeI, j).shifts) add(s.value, s.tag, j);
  for (int j = 0; j <= j_max; ++j)
    for (const auto& s : box_rates(n, Family::typeII, j).shifts) add(s.value, s.tag, j);
  e.values.assign(vals.begin(), vals.end());
  return e;
}

ExceptionalSet laplacian_power_exceptional(int n, int k, long window) {
  require_theorem_range(n, k);
  require(window >= 1, "laplacian_power_exceptional: window >= 1");
  ExceptionalSet e;
  e.n = n;
  e.k = k;
  e.window = window;
  // Excluded: -1, -2, ..., 2(k+1) - (n-1), empty when n = 2(k+1).
  const long last = 2L * (k + 1) - (n - 1);
  for (long v = -1; v >= last; --v) e.excluded.push_back(v);
  for (long v = -window; v <= window; ++v) {
    if (std::find(e.excluded.begin(), e.excluded.end(), v) != e.excluded.end()) continue;
    e.values.push_back(v);
    e.provenance[v].push_back(n == 2 * (k + 1) ? "Z (n = 2(k+1))" : "Z minus {-1..2(k+1)-(n-1)}");
  }
  return e;
}

QPoly boxt_characteristic(int n, const Q& t, Family family, int j) {
  require(n >= 3, "boxt_characteristic: n >= 3");
  const Q nn(n);
  if (family == Family::typeI) {
    require(j >= 1, "type I needs j >= 1");
    Q mu((j + 1) * (j + n - 3));
    // z^2 + (n-4-t) z - (mu - 2t)
    return QPoly({-(mu - 2 * t), nn - 4 - t, Q(1)});
  }
  require(j >= 0, "type II needs j >= 0");
  Q nu(j * (j + n - 2));
  QPoly p11({-4 * (nn - 2 - t / 2 + nu / 4), 2 * (nn - 4 - t), Q(2)});
  QPoly p12({4 * nu, -nu});
  QPoly p21({nn - t, Q(1)});
  QPoly p22({-2 * (nu - t), nn - 4 - t, Q(1)});
  return p11 * p22 - p12 * p21;
}

std::vector<TaggedRoot> boxt_rates(int n, const Q& t, Family family, int j) {
  require(std::abs(to_double(t)) < n / 2.0, "boxt_rates: needs |t| < n/2");
  std::vector<TaggedRoot> out;
  if (family == Family::typeI) {
    require(j >= 1, "type I needs j >= 1");
    const double td = to_double(t);
    const double m = n - 2 + 2 * j;
    const double disc = m * m - 2.0 * n * td + td * td;
    const double b = n - 4 - td;
    if (disc >= 0) {
      out.push_back({{(-b + std::sqrt(disc)) / 2, 0.0}, "typeI", false});
      out.push_back({{(-b - std::sqrt(disc)) / 2, 0.0}, "typeI", false});
    } else {
      out.push_back({{-b / 2, std::sqrt(-disc) / 2}, "typeI", false});
      out.push_back({{-b / 2, -std::sqrt(-disc) / 2}, "typeI", false});
    }
    return out;
  }
  require(j >= 0, "type II needs j >= 0");
  const Q nn(n);
  if (j == 0) {
    // nu = 0: the off-diagonal entry vanishes and the system decouples.
    QPoly l({-4 * (nn - 2 - t / 2), 2 * (nn - 4 - t), Q(2)});
    QPoly u({2 * t, nn - 4 - t, Q(1)});
    for (const auto& r : roots_exact(l))
      for (int i = 0; i < r.multiplicity; ++i) out.push_back({r.value, "l-equation", false});
    for (const auto& r : roots_exact(u))
      for (int i = 0; i < r.multiplicity; ++i) out.push_back({r.value, "u-equation", true});
    return out;
  }
  for (const auto& r : roots_exact(boxt_characteristic(n, t, family, j)))
    for (int i = 0; i < r.multiplicity; ++i) out.push_back({r.value, "quartic", false});
  return out;
}

std::vector<TaggedRoot> boxt_rates(int n, double t, Family family, int j) {
  return boxt_rates(n, q_from_decimal(t), family, j);
}

GapReport essential_linear_gap(int n, double t, int j_max) {
  require(j_max >= 3, "essential_linear_gap: j_max >= 3");
  require(std::abs(t) <= 0.5, "essential_linear_gap: |t| <= 0.5");
  GapReport rep;
  rep.n = n;
  rep.t = t;
  rep.j_max = j_max;
  std::vector<GapWitness> all;
  for (int j = 1; j <= j_max; ++j) {
    auto roots = boxt_rates(n, t, Family::typeI, j);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (j == 1 && i == 0) continue;  // c_1^+: duals of Killing fields
      all.push_back({Family::typeI, j, roots[i].value, roots[i].value.real() - 1, 0});
    }
  }
  for (int j = 0; j <= j_max; ++j)
    for (const auto& r : boxt_rates(n, t, Family::typeII, j)) {
      if (r.vacuous) continue;
      all.push_back({Family::typeII, j, r.value, r.value.real() - 1, 0});
    }
  double best = 1.0;
  for (auto& w : all) {
    w.distance = std::abs(w.growth - 1.0);
    best = std::min(best, w.distance);
  }
  rep.gamma0 = best < 1e-12 ? 0.0 : best;
  for (const auto& w : all)
    if (w.distance <= best + 1e-12) rep.witnesses.push_back(w);
  return rep;
}

QPoly scalar_indicial_polynomial(int n, int k, int s) {
  require(s >= 0, "scalar_indicial_polynomial: s >= 0");
  require(k >= 0, "scalar_indicial_polynomial: k >= 0");
  QPoly acc = QPoly::constant(1);
  const Q eig(s * (s + n - 2));
  for (int i = 0; i <= k; ++i) {
    QPoly a({Q(-2 * i), Q(1)});
    QPoly b({Q(-2 * i + n - 2), Q(1)});
    acc = acc * (a * b - QPoly::constant(eig));
  }
  return acc;
}

}  // namespace ale
