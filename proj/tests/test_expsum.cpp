#include <cmath>
#include <numbers>
#include <random>

#include "ale/errors.hpp"
#include "ale/expsum.hpp"
#include "ale/seeds.hpp"
#include "doctest.h"

using namespace ale;

TEST_CASE("eval_expsum basics") {
  CHECK(std::abs(eval_expsum(ExpSum({{1.0, 0.0, 0}}), 5.0) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(eval_expsum(ExpSum({{1.0, cplx(0, 1), 0}}), std::numbers::pi) - cplx(-1.0)) < 1e-15);
  CHECK(std::abs(eval_expsum(ExpSum({{1.0, 1.0, 1}}), 1.0) - cplx(std::numbers::e)) < 1e-14);
  CHECK_THROWS_AS(eval_expsum(ExpSum({{1.0, 1.0, 0}}), 1e6), RangeError);
  CHECK_THROWS(eval_expsum(ExpSum({{1.0, 1.0, 0}}), NAN));
}

TEST_CASE("normalization merges, drops zeros and is idempotent") {
  ExpSum p({{1.0, 2.0, 0}, {2.0, 2.0, 0}, {1.0, 1.0, 1}, {-1.0, 1.0, 1}, {0.5, cplx(0, 1), 2}});
  CHECK(p.terms().size() == 2);
  CHECK(p.d() == 2);
  CHECK(p.bigM() == 2);
  CHECK(normalize(p) == p);
  CHECK(normalize(normalize(p)) == normalize(p));
  CHECK_THROWS(ExpSum({{1.0, 1.0, -1}}));
}

TEST_CASE("shift re-expansion matches evaluation") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    ExpSum p = random_sum_with_powers(rng, 4, -1.0, 1.0);
    double c = 0.37 * (trial % 5) - 0.5;
    ExpSum q = shift(p, c);
    for (double t : {0.0, 0.3, 1.7}) {
      cplx a = eval_expsum(q, t), b = eval_expsum(p, t + c);
      CHECK(std::abs(a - b) < 1e-11 * (1 + std::abs(b)));
    }
  }
}

TEST_CASE("closed-form integral of |p|^2 matches Gauss-Kronrod") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    ExpSum p = random_sum_with_powers(rng, 1 + trial % 5, -1.5, 1.5);
    double a = 0.1 + 0.05 * (trial % 7), b = a + 0.2 + 0.3 * (trial % 4);
    double x = integral_abs2(p, a, b), y = integral_abs2_quad(p, a, b);
    CHECK(std::abs(x - y) <= 1e-8 * std::max(1e-12, y));
  }
  // resonant pair: e^{it} and e^{-it} give lambda = 0 for the cross terms
  ExpSum osc({{1.0, cplx(0, 1), 0}, {1.0, cplx(0, -1), 0}});
  CHECK(std::abs(integral_abs2(osc, 0, 1) - integral_abs2_quad(osc, 0, 1)) < 1e-12);
  CHECK_THROWS(integral_abs2(osc, 1.0, 1.0 + 1e-10));
}

TEST_CASE("sup_abs2") {
  ExpSum p({{1.0, 1.0, 0}});
  CHECK(std::abs(sup_abs2(p, 0, 1) - std::exp(2.0)) < 1e-12);
  ExpSum bump({{1.0, 0.0, 1}, {-1.0, 0.0, 2}});  // t - t^2, max 1/16 at t = 1/2
  CHECK(std::abs(sup_abs2(bump, 0, 1) - 1.0 / 16) < 1e-12);
}

TEST_CASE("turan_discrete examples") {
  auto r = turan_discrete({2.0}, {3.0}, 5);
  CHECK(r.lhs == doctest::Approx(9));
  CHECK(r.rhs == doctest::Approx(36864));
  CHECK(r.holds);
  auto s = turan_discrete({1.0, -1.0}, {1.0, 1.0}, 1);
  CHECK(s.lhs == doctest::Approx(4));
  CHECK(s.rhs == doctest::Approx(4));
  CHECK(s.holds);
  CHECK_THROWS_AS(turan_discrete({0.5}, {1.0}, 1), PreconditionError);
  CHECK_THROWS_AS(turan_discrete({}, {}, 1), PreconditionError);
}

TEST_CASE("turan_integral examples") {
  auto r = turan_integral(ExpSum({{1.0, 0.0, 0}}), 1, 2, 1);
  CHECK(r.lhs == doctest::Approx(1));
  CHECK(r.integral == doctest::Approx(1));
  CHECK(r.holds);
  auto e = turan_integral(ExpSum({{1.0, 1.0, 0}}), 1, 2, 1);
  CHECK(e.sup_lhs == doctest::Approx(std::exp(2.0)));
  CHECK(e.tail_integral == doctest::Approx((std::exp(4.0) - std::exp(3.0)) / 2));
  CHECK(e.sup_holds);
  CHECK(e.l2_holds);
  CHECK_THROWS(turan_integral(ExpSum({{1.0, -1.0, 0}}), 1, 2, 1));
  CHECK_THROWS(turan_integral(ExpSum({{1.0, 1.0, 0}}), 2, 1, 1));
}

TEST_CASE("three_interval examples") {
  auto g = three_interval(ExpSum({{1.0, 1.0, 0}}), 1, 1, IntervalMode::growth);
  const double e = std::numbers::e;
  CHECK(g.lhs == doctest::Approx(e * (e * e - 1) / 2));
  CHECK(g.holds);
  auto d = three_interval(ExpSum({{1.0, -1.0, 0}}), 1, 1, IntervalMode::decay);
  CHECK(d.holds);
  auto t = three_interval(ExpSum({{1.0, 1.0, 1}}), 1, 2, IntervalMode::growth);
  CHECK(t.M == 1);
  CHECK(t.holds);
  CHECK_THROWS(three_interval(ExpSum({{1.0, 1.0, 0}, {1.0, -1.0, 0}}), 1, 1, IntervalMode::growth));
}

TEST_CASE("estimate_turan_constant") {
  auto e1 = estimate_turan_constant(1, 10, 2000, 3);
  CHECK(e1.value == doctest::Approx(1.0).epsilon(1e-9));
  auto a = estimate_turan_constant(2, 10, 10000, 7), b = estimate_turan_constant(2, 10, 10000, 8);
  CHECK(a.value > 0);
  CHECK(std::isfinite(a.value));
  CHECK(std::abs(a.value - b.value) <= 0.1 * a.value);
  // same seed, same answer
  CHECK(estimate_turan_constant(2, 10, 500, 99).value == estimate_turan_constant(2, 10, 500, 99).value);
}

TEST_CASE("shipped table drives the integral and corollary constants") {
  const auto& t = TuranTable::shipped();
  for (int d = 1; d <= 4; ++d) {
    CHECK(t.integral_at(d) == doctest::Approx(d * d * std::pow(4.0, d - 1) * t.discrete_at(d)));
    CHECK(t.corollary_at(d) == doctest::Approx(14 * std::pow(16.0, d - 1) * t.integral_at(d)));
  }
  CHECK_THROWS(t.discrete_at(0));
  CHECK_THROWS(t.discrete_at(TuranTable::kMaxD + 1));
}

TEST_CASE("shift covariance of the three-interval verdicts") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    ExpSum p = random_sum_with_powers(rng, 3, 0.2, 1.5);
    ExpSum q = shift(p, 1.0);  // q(t) = p(t+1): interval l on q is interval l+1 shifted by R-1 = 0 on p when R = 1
    auto a = three_interval(q, 1, 1, IntervalMode::growth);
    auto b = three_interval(p, 1, 2, IntervalMode::growth);
    CHECK(a.holds == b.holds);
    CHECK(a.lhs == doctest::Approx(b.lhs).epsilon(1e-8));
  }
}

TEST_CASE("turan sweep: serial and parallel agree, no violations") {
  auto s = turan_sweep_serial(2000, 200, 200, 5);
  auto p = turan_sweep(2000, 200, 200, 5, TuranTable::shipped(), 2);
  CHECK(s.discrete_trials == 2000);
  CHECK(s.discrete_violations == 0);
  CHECK(s.integral_violations == 0);
  CHECK(s.corollary_violations == 0);
  CHECK(s.growth_violations == 0);
  CHECK(s.decay_violations == 0);
  CHECK(p.discrete_trials == s.discrete_trials);
  CHECK(p.discrete_worst == s.discrete_worst);
  CHECK(p.integral_worst == s.integral_worst);
  CHECK(p.interval_worst == s.interval_worst);
}
