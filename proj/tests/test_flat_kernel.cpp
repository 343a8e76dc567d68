#include <cmath>
#include <random>

#include "ale/errors.hpp"
#include "ale/flat_kernel.hpp"
#include "ale/polytensor.hpp"
#include "doctest.h"

using namespace ale;

namespace {

// X with a single symmetric coefficient pair a_ilm = a_iml = 1, as a field.
QTensor quadratic_basis_field(int n, int i, int l, int m) {
  QTensor X(n, 1);
  QPolyField f = QPolyField::coordinate(n, l) * QPolyField::coordinate(n, m);
  X.at({i}) += (l == m ? Q(1) : Q(2)) * f;
  return X;
}

}  // namespace

TEST_CASE("divfree examples") {
  auto r0 = divfree_nullspace(6, 1, DivfreeMode::degree0);
  CHECK(r0.dimension == 0);
  auto r1 = divfree_nullspace(6, 1, DivfreeMode::degree1);
  CHECK(r1.unknowns == 126);
  CHECK(r1.dimension == 0);
  CHECK(r1.identities_implied);
  CHECK(divfree_nullspace(4, 1, DivfreeMode::log).dimension == 0);
  CHECK(divfree_nullspace(3, 1, DivfreeMode::n3_degree1).dimension == 0);
}

TEST_CASE("divfree sweep: both routes agree and vanish") {
  auto checks = divfree_sweep_serial(8);
  std::size_t log_cases = 0;
  for (const auto& c : checks) {
    INFO("n=" << c.result.n << " k=" << c.result.k << " " << to_string(c.result.mode));
    CHECK(c.result.dimension == 0);
    CHECK(c.field_dimension == c.result.dimension);
    CHECK(c.result.identities_implied);
    if (c.result.mode == DivfreeMode::log) ++log_cases;
    if (c.result.mode == DivfreeMode::degree1)
      CHECK(c.result.unknowns == static_cast<std::size_t>(c.result.n * c.result.n * (c.result.n + 1) / 2));
  }
  CHECK(log_cases == 3);  // n = 4, 6, 8
  auto par = divfree_sweep(8, 2);
  REQUIRE(par.size() == checks.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].result.rank == checks[i].result.rank);
    CHECK(par[i].field_dimension == checks[i].field_dimension);
  }
}

TEST_CASE("divfree preconditions") {
  CHECK_THROWS_AS(divfree_nullspace(6, 1, DivfreeMode::log), PreconditionError);
  CHECK_THROWS_AS(divfree_nullspace(4, 1, DivfreeMode::degree0), PreconditionError);
  CHECK_THROWS_AS(divfree_nullspace(4, 1, DivfreeMode::n3_degree1), PreconditionError);
  CHECK_THROWS_AS(divfree_nullspace(4, 0, DivfreeMode::degree1), PreconditionError);
  CHECK_THROWS_AS(divfree_nullspace(4, 2, DivfreeMode::degree1), PreconditionError);
  CHECK_THROWS_AS(divfree_mode_from_string("degree2"), PreconditionError);
  CHECK(divfree_mode_from_string("n3_degree1") == DivfreeMode::n3_degree1);
}

TEST_CASE("degree1 system: one row per (j, p <= q), full column rank") {
  auto r = divfree_nullspace(5, 1, DivfreeMode::degree1);
  CHECK(r.equations == 5u * 15u);
  CHECK(r.rank == r.unknowns);
}

TEST_CASE("quadratic Lie map: sizes and invertibility") {
  CHECK(quadratic_lie_isomorphism(3).rows == 18);
  CHECK(quadratic_lie_isomorphism(4).rows == 40);
  for (int n = 2; n <= 6; ++n) {
    auto rep = quadratic_lie_isomorphism(n);
    INFO("n=" << n);
    CHECK(rep.rows == rep.cols);
    CHECK(rep.rank == static_cast<std::size_t>(n * n * (n + 1) / 2));
    CHECK(rep.invertible);
    CHECK(rep.killing_dimension == 0);
    CHECK(rep.printed_dimension == static_cast<std::size_t>(n * n * (n - 1) / 2));
  }
  CHECK_THROWS_AS(quadratic_lie_isomorphism(1), PreconditionError);
}

TEST_CASE("quadratic Lie map matches the tensor-calculus Lie derivative") {
  for (int n = 2; n <= 4; ++n) {
    auto rep = quadratic_lie_isomorphism(n);
    SparseEchelon<CoordKey> ech;
    std::size_t r = 0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l)
        for (int m = l; m < n; ++m) {
          QTensor L = lie(quadratic_basis_field(n, i, l, m));
          if (ech.add(coordinates(L))) ++r;
          const std::size_t col = sym_index(n, l, m) * n + i;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
              QPolyField expect(n);
              for (int c = 0; c < n; ++c) {
                const Q& v = rep.matrix(sym3_index(n, a, b, c), col);
                if (v != 0) expect += v * QPolyField::coordinate(n, c);
              }
              CHECK(L.at({a, b}) == expect);
            }
        }
    CHECK(r == rep.rank);
    CHECK(rank(rep.matrix) == rep.rank);
  }
}

TEST_CASE("flow defect: zero field") {
  auto rep = quadratic_flow_error(zero_quadratic_field(3), {1e-1, 1e-2, 1e-3});
  for (double e : rep.errors) CHECK(e == 0.0);
  CHECK(std::isnan(rep.slope));
}

TEST_CASE("flow defect: a_111 = 1 has slope 2") {
  QuadraticField X = zero_quadratic_field(3);
  X.set(0, 0, 0, 1.0);
  auto rep = quadratic_flow_error(X, {1e-1, 1e-1 / std::sqrt(10.0), 1e-2, 1e-2 / std::sqrt(10.0), 1e-3});
  CHECK(rep.C_X == doctest::Approx(2.0));
  CHECK(rep.slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("flow defect: closed-form flow of x_1^2 e_1") {
  // x_1(t) = p_1 / (1 - p_1 t), other coordinates fixed; the defect is
  // (1 - p_1)^{-4} - 1 - 4 p_1 in the (1,1) slot.
  QuadraticField X = zero_quadratic_field(3);
  X.set(0, 0, 0, 1.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 20; ++i) {
    const double r = std::pow(10.0, -1 - 2.0 * i / 19);
    std::vector<double> p{g(rng), g(rng), g(rng)};
    const double s = r / std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    for (double& v : p) v *= s;
    const double exact = std::pow(1 - p[0], -4) - 1 - 4 * p[0];
    CHECK(flow_defect_at(X, p) == doctest::Approx(std::abs(exact)).epsilon(1e-6).scale(0));
  }
}

TEST_CASE("flow defect: random unit fields") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    QuadraticField X = random_quadratic_field(3, rng);
    double s = 0;
    for (double v : X.a) s += v * v;
    CHECK(s == doctest::Approx(1.0));
    auto rep = quadratic_flow_error(X, {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}, 24, trial);
    CHECK(rep.slope >= 1.9);
    CHECK(rep.slope <= 2.1);
  }
}

TEST_CASE("flow defect preconditions") {
  QuadraticField X = zero_quadratic_field(2);
  X.set(0, 0, 0, 1.0);
  CHECK_THROWS_AS(quadratic_flow_error(X, {0.3, 0.01}), PreconditionError);  // C_X = 2, bound 0.25
  CHECK_THROWS_AS(quadratic_flow_error(X, {0.1, 0.05}), PreconditionError);  // less than a decade
  CHECK_THROWS_AS(quadratic_flow_error(X, {0.1, -0.01}), PreconditionError);
}
