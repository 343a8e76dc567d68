#include <cmath>

#include "ale/decay_bootstrap.hpp"
#include "ale/errors.hpp"
#include "ale/flat_kernel.hpp"
#include "ale/indicial.hpp"
#include "doctest.h"

using namespace ale;

namespace {

std::vector<Q> qs(std::initializer_list<const char*> v) {
  std::vector<Q> out;
  for (auto s : v) out.push_back(q_parse(s));
  return out;
}

int log2_ceil(const Q& ratio) {
  int m = 0;
  Q p = 1;
  while (p < ratio) {
    p *= 2;
    ++m;
  }
  return m;
}

}  // namespace

TEST_CASE("remainder order examples") {
  CHECK(remainder_order(1, 4, 0.3, Regime::infinity) == doctest::Approx(4.6));
  CHECK(remainder_order(1, 4, q_parse("3/10"), Regime::infinity) == q_parse("23/5"));
  CHECK(remainder_order(2, 6, q_parse("1/2"), Regime::origin) == q_parse("-5"));
  CHECK_THROWS_AS(remainder_order(1, 4, 0.0, Regime::infinity), PreconditionError);
}

TEST_CASE("remainder order: quadratic terms dominate every product") {
  for (int k = 1; k <= 3; ++k) {
    const auto terms = obstruction_remainder_terms(k, 2 * (k + 1) + 2);
    for (const char* o : {"1/10", "1/2", "1", "5/2"}) {
      const Q h = q_parse(o);
      for (Regime r : {Regime::infinity, Regime::origin}) {
        const Q least = remainder_order(k, 2 * k + 2, h, r);
        for (const auto& t : terms) {
          int sum = 0;
          for (int a : t.alphas) sum += a;
          CHECK(sum == 2 * (k + 1));
          const Q ord = t.order(h, r);
          CHECK(ord >= least);
          if (t.alphas.size() > 2) CHECK(ord > least);
        }
      }
    }
  }
  // Scalar curvature remainder: every family has order >= 2 h_order + 2.
  for (const auto& t : scalar_remainder_terms()) CHECK(t.order(q_parse("3/10"), Regime::infinity) >= q_parse("13/5"));
}

TEST_CASE("remainder order is monotone") {
  for (int i = 1; i < 40; ++i) {
    const Q a = qfrac(i, 10), b = qfrac(i + 1, 10);
    CHECK(remainder_order(2, 6, a, Regime::infinity) < remainder_order(2, 6, b, Regime::infinity));
    CHECK(remainder_order(2, 6, a, Regime::origin) < remainder_order(2, 6, b, Regime::origin));
  }
}

TEST_CASE("bootstrap at infinity: examples") {
  auto s = bootstrap_infinity(4, 1, 0.3);
  CHECK(s.terminal());
  CHECK(s.order == Q(2));
  CHECK(s.path() == qs({"3/10", "3/5", "1", "6/5", "2"}));
  CHECK(bootstrap_infinity(6, 1, 0.5).order == Q(4));
  auto l = bootstrap_infinity(6, 2, 0.4);
  CHECK(l.order == Q(2));
  bool log_kill = false;
  for (const auto& h : l.history) log_kill = log_kill || h.mechanism.find("log-mode") != std::string::npos;
  CHECK(log_kill);
  auto done = bootstrap_infinity(4, 1, 2.5);
  CHECK(done.order == Q(2));
  CHECK(done.history.empty());
  CHECK_THROWS_AS(bootstrap_infinity(4, 1, 0.0), PreconditionError);
  CHECK_THROWS_AS(bootstrap_infinity(4, 2, 0.5), PreconditionError);
}

TEST_CASE("bootstrap at infinity: grid, step bound and verified kills") {
  for (int n = 3; n <= 10; ++n)
    for (int k = 1; 2 * k <= n; ++k) {
      if (!in_theorem_range(n, k)) continue;
      for (int b = 1; b < 10 * (n - 2 * k); ++b) {
        const Q beta0 = qfrac(b, 10);
        auto s = bootstrap_infinity(n, k, beta0);
        INFO("n=" << n << " k=" << k << " beta0=" << beta0.get_str());
        CHECK(s.terminal());
        CHECK(s.order == Q(n - 2 * k));
        int kills = 0;
        Q last = s.initial;
        for (const auto& h : s.history) {
          CHECK(h.order >= last);
          last = h.order;
          if (h.verified) {
            ++kills;
            CHECK(*h.verified);
          }
        }
        const int bound = log2_ceil(Q(n - 2 * k) / beta0) + kills;
        CHECK(static_cast<int>(s.history.size()) <= bound);
        // Kills are exactly the exceptional degrees above beta0 and the log mode.
        int expected = n == 2 * (k + 1) ? 1 : 0;
        for (int d : s.barriers) expected += Q(d) >= beta0 ? 1 : 0;
        CHECK(kills == expected);
      }
    }
}

TEST_CASE("bootstrap kills agree with the flat kernels") {
  auto s = bootstrap_infinity(8, 1, 0.7);
  CHECK(s.barriers == std::vector<int>{4, 5});
  CHECK(divfree_nullspace(8, 1, DivfreeMode::degree0).dimension == 0);
  CHECK(divfree_nullspace(8, 1, DivfreeMode::degree1).dimension == 0);
  auto o = bootstrap_origin(5, 1, 0.5);
  CHECK(o.barriers == std::vector<int>{1});
  CHECK(quadratic_lie_isomorphism(5).invertible);
}

TEST_CASE("bootstrap at the origin") {
  auto s = bootstrap_origin(4, 1, 0.5);
  CHECK(s.order == Q(2));
  bool lie = false;
  for (const auto& h : s.history)
    if (h.mechanism.find("Lie subtraction") != std::string::npos) {
      lie = true;
      CHECK(h.verified.value_or(false));
    }
  CHECK(lie);
  CHECK(bootstrap_origin(6, 2, 0.3).order == Q(2));
  auto done = bootstrap_origin(4, 1, 3.0);
  CHECK(done.order == Q(2));
  CHECK(done.history.empty());
  for (int n = 3; n <= 8; ++n)
    for (int k = 1; 2 * k <= n; ++k) {
      if (!in_theorem_range(n, k)) continue;
      for (int b = 1; b < 20; ++b) CHECK(bootstrap_origin(n, k, qfrac(b, 10)).terminal());
    }
  CHECK_THROWS_AS(bootstrap_origin(4, 1, -1.0), PreconditionError);
}

TEST_CASE("regularity ladder") {
  auto a = regularity_ladder(4, 1);
  CHECK(a.p_infinite);
  CHECK(a.gap == 1.0);
  CHECK(a.gap_ok);
  CHECK(a.steps.size() == 7);
  auto b = regularity_ladder(8, 2);
  CHECK_FALSE(b.p_infinite);
  CHECK(b.p == doctest::Approx((1 - 1.0 / 6) * 4));
  CHECK(b.gap > 0);
  CHECK(b.gap <= 1);
  CHECK_THROWS_AS(regularity_ladder(8, 3, 0.5), PreconditionError);
  CHECK_THROWS_AS(regularity_ladder(10, 3, 0.5), PreconditionError);
  CHECK_THROWS_AS(regularity_ladder(8, 2, 0.0), PreconditionError);
  for (int n = 4; n <= 12; ++n)
    for (int k = 2; 2 * k <= n - 2; ++k)
      for (double f : {0.01, 0.5, 0.99}) {
        auto r = regularity_ladder(n, k, f / (2 * k - 1));
        CHECK(r.gap_ok);
      }
}
