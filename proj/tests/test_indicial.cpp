#include <algorithm>
#include <cmath>

#include "ale/errors.hpp"
#include "ale/indicial.hpp"
#include "ale/polytensor.hpp"
#include "doctest.h"

using namespace ale;

namespace {

std::vector<double> real_parts(const std::vector<TaggedRoot>& rs) {
  std::vector<double> v;
  for (const auto& r : rs) v.push_back(r.value.real());
  std::sort(v.begin(), v.end());
  return v;
}

bool contains(const std::vector<long>& v, long x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

TEST_CASE("box_rates examples") {
  auto a = box_rates(4, Family::typeI, 1);
  CHECK(a.eigen == 4);
  CHECK(a.center == 0);
  CHECK(a.radius == 2);
  CHECK(a.plus == 2);
  CHECK(a.minus == -2);
  auto b = box_rates(4, Family::typeII, 2);
  CHECK(b.eigen == 8);
  CHECK(b.center == -1);
  CHECK(b.radius == 3);
  CHECK(b.plus == 2);
  CHECK(b.minus == -4);
  auto c = box_rates(4, Family::typeII, 0);
  CHECK(c.plus == 0);
  CHECK(c.minus == -2);
  CHECK_THROWS_AS(box_rates(4, Family::typeI, 0), PreconditionError);
  CHECK_THROWS_AS(box_rates(4, Family::typeII, -1), PreconditionError);
}

TEST_CASE("box_rates quadratic relation") {
  for (int n = 3; n <= 8; ++n)
    for (int j = 0; j <= 10; ++j)
      for (Family f : {Family::typeI, Family::typeII}) {
        if (f == Family::typeI && j == 0) continue;
        auto r = box_rates(n, f, j);
        CHECK((r.plus - r.center) * (r.plus - r.center) == r.center * r.center + r.eigen);
        CHECK(r.plus + r.minus == 2 * r.center);
        CHECK(r.plus >= r.minus);
      }
}

TEST_CASE("box_exceptional") {
  for (int n = 3; n <= 8; ++n) {
    auto e = box_exceptional(n, 10);
    CHECK(e.all_integers);
    CHECK(contains(e.values, 1));
  }
  auto e4 = box_exceptional(4, 3);
  for (int j = 1; j <= 3; ++j) {
    CHECK(contains(e4.values, j + 1 - 1));
    CHECK(contains(e4.values, -(j + 1) - 1));
  }
  // n = 6: a_j^{+-} = -1 +- (2 + j)
  for (int j = 1; j <= 2; ++j) {
    auto r = box_rates(6, Family::typeI, j);
    CHECK(r.plus == -1 + (2 + j));
    CHECK(r.minus == -1 - (2 + j));
  }
}

TEST_CASE("boxt_rates type I closed form") {
  auto r = boxt_rates(4, 0.1, Family::typeI, 1);
  REQUIRE(r.size() == 2);
  CHECK(r[0].value.real() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r[1].value.real() == doctest::Approx(-1.9).epsilon(1e-14));
  for (int n = 3; n <= 8; ++n)
    for (int s = -40; s <= 40; ++s) {
      double t = s / 100.0;
      CHECK(std::abs(boxt_rates(n, t, Family::typeI, 1)[0].value.real() - 1 - 1) < 1e-12);
    }
}

TEST_CASE("boxt_rates at t = 0 reproduce box_rates and the shifted type II families") {
  for (int n = 3; n <= 8; ++n)
    for (int j = 1; j <= 6; ++j) {
      auto b = box_rates(n, Family::typeI, j);
      auto r = real_parts(boxt_rates(n, 0.0, Family::typeI, j));
      CHECK(std::abs(r[1] - to_double(b.plus)) < 1e-10);
      CHECK(std::abs(r[0] - to_double(b.minus)) < 1e-10);
    }
  // n = 4, j = 2: quartic roots contain b+ = 2 and b- = -4
  auto q = real_parts(boxt_rates(4, 0.0, Family::typeII, 2));
  REQUIRE(q.size() == 4);
  CHECK(std::any_of(q.begin(), q.end(), [](double x) { return std::abs(x - 2) < 1e-10; }));
  CHECK(std::any_of(q.begin(), q.end(), [](double x) { return std::abs(x + 4) < 1e-10; }));
  // j = 0: l-equation gives {2, -2}; the u-equation roots carry no field
  auto z = boxt_rates(4, 0.0, Family::typeII, 0);
  REQUIRE(z.size() == 4);
  int vac = 0;
  for (const auto& t : z) vac += t.vacuous;
  CHECK(vac == 2);
}

TEST_CASE("quartic roots are the b+-1 / b+-+1 families at t = 0") {
  // At t = 0 the type II rates of xi sit at b^{+-} + 1 and b^{+-} - 1 shifted by one
  // in 1-form homogeneity; check every root is an integer in the exceptional set plus one.
  for (int n = 3; n <= 8; ++n) {
    auto e = box_exceptional(n, 8);
    for (int j = 1; j <= 6; ++j)
      for (double x : real_parts(boxt_rates(n, 0.0, Family::typeII, j))) {
        CHECK(std::abs(x - std::round(x)) < 1e-10);
        CHECK(contains(e.values, std::lround(x) - 1));
      }
  }
}

TEST_CASE("essential_linear_gap") {
  auto z = essential_linear_gap(4, 0.0, 6);
  CHECK(z.gamma0 == 0.0);
  bool rdr = false, sph2 = false;
  for (const auto& w : z.witnesses) {
    rdr = rdr || (w.family == Family::typeII && w.j == 0);
    sph2 = sph2 || (w.family == Family::typeII && w.j == 2);
  }
  CHECK(rdr);
  CHECK(sph2);
  auto g = essential_linear_gap(4, 0.1, 6);
  CHECK(g.gamma0 > 0);
  CHECK(g.gamma0 < 1);
  for (const auto& w : g.witnesses) CHECK_FALSE((w.family == Family::typeI && w.j == 1 && w.root.real() > 1.5));
  CHECK_THROWS(essential_linear_gap(4, 0.1, 2));
}

TEST_CASE("laplacian_power_exceptional") {
  auto a = laplacian_power_exceptional(4, 1);
  CHECK(a.excluded.empty());
  CHECK(a.values.size() == 25);
  auto b = laplacian_power_exceptional(8, 1);
  CHECK(b.excluded == std::vector<long>{-1, -2, -3});
  auto c = laplacian_power_exceptional(6, 1);
  CHECK(c.excluded == std::vector<long>{-1});
  CHECK(!contains(c.values, -1));
  CHECK(contains(c.values, -2));
  CHECK_THROWS(laplacian_power_exceptional(4, 2));
  CHECK_THROWS(laplacian_power_exceptional(6, 3));
  // verbatim rule over the whole range
  for (int n = 3; n <= 10; ++n)
    for (int k = 1; k <= n; ++k) {
      if (!in_theorem_range(n, k)) continue;
      auto e = laplacian_power_exceptional(n, k, 15);
      for (long v = -15; v <= 15; ++v) {
        bool excluded = v <= -1 && v >= 2L * (k + 1) - (n - 1);
        CHECK(contains(e.values, v) == !excluded);
      }
    }
}

TEST_CASE("scalar indicial polynomial roots") {
  auto p = scalar_indicial_polynomial(4, 1, 0);
  auto r = roots_exact(p);
  std::map<long, int> mult;
  for (const auto& x : r) mult[std::lround(x.value.real())] += x.multiplicity;
  CHECK(mult == std::map<long, int>{{-2, 1}, {0, 2}, {2, 1}});
  auto q = roots_exact(scalar_indicial_polynomial(4, 1, 2));
  std::map<long, int> m2;
  for (const auto& x : q) m2[std::lround(x.value.real())] += x.multiplicity;
  CHECK(m2 == std::map<long, int>{{-4, 1}, {-2, 1}, {2, 1}, {4, 1}});
  for (int k = 1; k <= 3; ++k) {
    int n = 2 * (k + 1);
    for (const auto& x : roots_exact(scalar_indicial_polynomial(n, k, 0)))
      if (std::abs(x.value) < 1e-12) CHECK(x.multiplicity == 2);
  }
}

TEST_CASE("scalar indicial roots annihilate r^z times a harmonic under Delta^{k+1}") {
  for (auto [n, k] : std::vector<std::pair<int, int>>{{4, 1}, {6, 1}, {6, 2}, {3, 1}}) {
    for (int s = 0; s <= 3; ++s) {
      // degree-s harmonic Re (x1 + i x2)^s, divided by r^s to make it angular
      QPolyField h(n);
      for (int a = 0; a <= s; a += 2) {
        Mono m;
        m.alpha[0] = static_cast<std::uint8_t>(s - a);
        m.alpha[1] = static_cast<std::uint8_t>(a);
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), s, a);
        h.add_term(m, Q(((a / 2) % 2 ? -1 : 1) * binom));
      }
      QTensor f = scalar_field(mul_r(h, Q(-s)));
      for (const auto& rt : roots_exact(scalar_indicial_polynomial(n, k, s))) {
        if (std::abs(rt.value.imag()) > 1e-12) continue;
        Q z = q_from_decimal(std::round(rt.value.real() * 2) / 2);
        if (std::abs(to_double(z) - rt.value.real()) > 1e-12) continue;
        QTensor out = laplacian_power(mul_r(f, z), k + 1);
        CHECK(out.is_zero());
      }
    }
  }
}
