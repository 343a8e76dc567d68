#include <cmath>
#include <random>

#include "ale/errors.hpp"
#include "ale/indicial.hpp"
#include "ale/mode_ode.hpp"
#include "doctest.h"

using namespace ale;

namespace {

QPoly quad(const Q& c0, const Q& c1, const Q& c2) { return QPoly({c0, c1, c2}); }

IndicialSpectrum spectrum_of(Opcode op, const OpParams& p, const AngularBasis& b) {
  return indicial_spectrum(probe_euler(op, p, b));
}

std::vector<IndicialSpectrum> nondegenerate_modes(int n, int k, int j_max) {
  OpParams p;
  p.k = k;
  std::vector<IndicialSpectrum> out;
  for (int j = 0; j <= j_max; ++j)
    for (const auto& b : two_tensor_modes(n, j, p)) {
      auto s = spectrum_of(Opcode::P_t_k, p, b);
      if (s.A_zero.empty()) out.push_back(s);
    }
  return out;
}

// Spectrum with prescribed simple real roots, one family of weight 1.
IndicialSpectrum toy_spectrum(std::vector<double> roots) {
  IndicialSpectrum s;
  s.m_ang = 1;
  s.order = static_cast<int>(roots.size());
  s.weights = {1.0};
  s.beta = INFINITY;
  for (std::size_t a = 0; a < roots.size(); ++a) {
    SpectralRoot r;
    r.value = roots[a];
    r.chains = Eigen::MatrixXcd::Ones(1, 1);
    s.roots.push_back(r);
    if (roots[a] == 0)
      s.A_zero.push_back(a);
    else
      (roots[a] > 0 ? s.A_plus : s.A_minus).push_back(a);
    if (roots[a] != 0) s.beta = std::min(s.beta, std::abs(roots[a]));
    s.total_multiplicity += 1;
  }
  return s;
}

}  // namespace

TEST_CASE("probed box on type I is z^2 + (n-4) z - mu") {
  for (int n = 3; n <= 6; ++n)
    for (int j = 1; j <= 3; ++j) {
      auto E = probe_euler(Opcode::box, OpParams{}, typeI_basis(n, j));
      const Q mu = box_rates(n, Family::typeI, j).eigen;
      REQUIRE(E.P.size() == 1);
      CHECK(E.P[0][0] == quad(-mu, Q(n - 4), Q(1)));
      CHECK(E.weight == 2);
    }
}

TEST_CASE("probed box_t on type I: n = 4, t = 1/10, mu = 4") {
  OpParams p;
  p.t = qfrac(1, 10);
  auto E = probe_euler(Opcode::box_t, p, typeI_basis(4, 1));
  CHECK(E.P[0][0] == quad(qfrac(-19, 5), qfrac(-1, 10), Q(1)));
  for (int n = 3; n <= 6; ++n)
    for (const Q& t : {qfrac(-3, 10), qfrac(1, 20), qfrac(2, 5)}) {
      p.t = t;
      const Q mu = box_rates(n, Family::typeI, 2).eigen;
      auto F = probe_euler(Opcode::box_t, p, typeI_basis(n, 2));
      CHECK(F.P[0][0] == quad(-(mu - 2 * t), Q(n - 4) - t, Q(1)));
    }
}

TEST_CASE("probed box_t on type II equals the displayed 2x2 system") {
  for (int n = 3; n <= 6; ++n)
    for (int j = 1; j <= 3; ++j)
      for (const Q& t : {Q(0), qfrac(1, 10), qfrac(-3, 20)}) {
        OpParams p;
        p.t = t;
        auto E = probe_euler(Opcode::box_t, p, typeII_basis(n, j));
        const Q nu = box_rates(n, Family::typeII, j).eigen;
        REQUIRE(E.P.size() == 2);
        CHECK(E.P[0][0] == quad(-4 * (Q(n - 2) - t / 2 + nu / 4), 2 * (Q(n - 4) - t), Q(2)));
        CHECK(E.P[0][1] == QPoly({4 * nu, -nu}));
        CHECK(E.P[1][0] == QPoly({Q(n) - t, Q(1)}));
        CHECK(E.P[1][1] == quad(-2 * (nu - t), Q(n - 4) - t, Q(1)));
        CHECK(E.det() == boxt_characteristic(n, t, Family::typeII, j));
      }
}

TEST_CASE("box type I spectrum at n = 4, mu = 4") {
  auto s = spectrum_of(Opcode::box, OpParams{}, typeI_basis(4, 1));
  REQUIRE(s.roots.size() == 2);
  CHECK(s.roots[0].value.real() == doctest::Approx(-2));
  CHECK(s.roots[1].value.real() == doctest::Approx(2));
  CHECK(s.beta == doctest::Approx(2));
  CHECK(s.A_zero.empty());
  CHECK(s.A_plus.size() == 1);
  CHECK(s.A_minus.size() == 1);
  CHECK_FALSE(s.low_confidence);
}

TEST_CASE("Delta^2 on the radial scalar mode has det z^2 (z - 2)(z + 2)") {
  OpParams p;
  p.k = 1;
  auto b = make_basis({scalar_field(QPolyField::constant(4, Q(1)))}, "scalar s=0");
  auto E = probe_euler(Opcode::lap_power, p, b);
  QPoly det = E.det();
  CHECK(det.monic() == QPoly({0, 0, -4, 0, 1}));
  CHECK(det.monic() == scalar_indicial_polynomial(4, 1, 0).monic());
}

TEST_CASE("total multiplicity is 8(k+1) on four-family modes") {
  for (auto [n, k] : {std::pair{4, 1}, {6, 1}, {6, 2}}) {
    OpParams p;
    p.k = k;
    for (int j = 2; j <= 3; ++j) {
      auto b = scalar_type_basis(n, j);
      REQUIRE(b.size() == 4);
      auto s = spectrum_of(Opcode::P_t_k, p, b);
      CHECK(s.total_multiplicity == 8 * (k + 1));
      CHECK(s.det.degree() == 8 * (k + 1));
    }
  }
}

TEST_CASE("spectrum multiplicity equals m_ang times order") {
  OpParams p;
  p.k = 1;
  p.t = qfrac(1, 10);
  for (int j = 0; j <= 3; ++j)
    for (const auto& b : two_tensor_modes(4, j, p)) {
      auto s = spectrum_of(Opcode::P_t_k, p, b);
      CHECK(s.total_multiplicity == s.m_ang * s.order);
      std::size_t parts = s.A_plus.size() + s.A_minus.size() + s.A_zero.size();
      CHECK(parts == s.roots.size());
      for (const auto& r : s.roots) {
        CHECK(r.residual < 1e-10);
        CHECK(r.chains.rows() == r.multiplicity * s.m_ang);
      }
    }
}

TEST_CASE("scalar-type basis is the closure of phi dr dr") {
  // At t = 0 the operator is a componentwise Laplacian power and the closure
  // can be a proper subspace; it must still sit inside the scalar-type span.
  for (const Q& t : {Q(0), qfrac(1, 10)}) {
    OpParams p;
    p.k = 1;
    p.t = t;
    for (int j = 0; j <= 3; ++j) {
      auto ref = scalar_type_basis(4, j);
      auto cl = closure_basis(scalar_type_tensors(4, j).front(), Opcode::P_t_k, p);
      if (t != 0) CHECK(cl.size() == ref.size());
      for (const auto& e : cl.elements) CHECK(ref.coordinates_of(e).has_value());
    }
  }
}

TEST_CASE("probing a basis that is not closed is rejected") {
  OpParams p;
  p.k = 1;
  auto seed_only = make_basis({scalar_type_tensors(4, 2).front()}, "T1 only");
  CHECK_THROWS_AS(probe_euler(Opcode::P_t_k, p, seed_only), PreconditionError);
  CHECK_THROWS_AS(probe_euler(Opcode::box, OpParams{}, typeI_basis(4, 1), {Q(0), Q(1)}), PreconditionError);
}

TEST_CASE("P_0 spectra are scalar indicial roots of the component harmonics") {
  OpParams p;
  p.k = 1;
  for (int j = 0; j <= 3; ++j) {
    auto s = spectrum_of(Opcode::P_t_k, p, scalar_type_basis(4, j));
    for (const auto& r : s.roots) {
      bool found = false;
      for (int deg = std::max(0, j - 2); deg <= j + 2; ++deg)
        for (const auto& q : roots_exact(scalar_indicial_polynomial(4, 1, deg)))
          found = found || std::abs(q.value - r.value) < 1e-9;
      CHECK(found);
    }
  }
}

TEST_CASE("small t keeps beta positive on the scanned modes") {
  OpParams p;
  p.k = 1;
  p.t = qfrac(1, 20);
  for (int j = 0; j <= 4; ++j)
    for (const auto& b : two_tensor_modes(4, j, p)) CHECK(spectrum_of(Opcode::P_t_k, p, b).beta > 0);
}

TEST_CASE("solution_split is a direct sum") {
  OpParams p;
  p.k = 1;
  auto s = spectrum_of(Opcode::P_t_k, p, scalar_type_basis(4, 2));
  REQUIRE_FALSE(s.A_zero.empty());
  std::mt19937_64 rng(7);
  auto sol = random_mode_solution(s, rng, false);
  auto sp = solution_split(sol, s);
  CHECK(sp.has_zero);
  std::uniform_real_distribution<double> radius(0.2, 5.0);
  for (int i = 0; i < 100; ++i) {
    double r = radius(rng);
    Eigen::VectorXcd whole = eval_mode(sol, s, r);
    Eigen::VectorXcd parts = eval_mode(sp.plus, s, r) + eval_mode(sp.minus, s, r) + eval_mode(sp.zero, s, r);
    CHECK((whole - parts).norm() <= 1e-12 * std::max(1.0, whole.norm()));
  }
}

TEST_CASE("solution_split examples") {
  auto s = toy_spectrum({-2, 2});
  ModeSolution sol;
  sol.d = {{Eigen::VectorXcd::Ones(1)}, {Eigen::VectorXcd::Ones(1)}};
  auto sp = solution_split(sol, s);
  CHECK_FALSE(sp.has_zero);
  CHECK(std::abs(eval_mode(sp.plus, s, 3.0)(0) - 9.0) < 1e-12);
  CHECK(std::abs(eval_mode(sp.minus, s, 3.0)(0) - 1.0 / 9.0) < 1e-12);
  CHECK(sp.beta == 2);

  auto z = toy_spectrum({0});
  z.roots[0].value = cplx(0, 1);
  ModeSolution one;
  one.d = {{Eigen::VectorXcd::Ones(1)}};
  CHECK(solution_split(one, z).has_zero);

  // (log r) r^0 at a double root 0.
  IndicialSpectrum dbl = toy_spectrum({0});
  dbl.roots[0].multiplicity = 2;
  ModeSolution logsol;
  logsol.d = {{Eigen::VectorXcd::Zero(1), Eigen::VectorXcd::Ones(1)}};
  auto ls = solution_split(logsol, dbl);
  CHECK(ls.has_zero);
  CHECK(std::abs(eval_mode(ls.zero, dbl, std::exp(2.0))(0) - 2.0) < 1e-12);
}

TEST_CASE("mode profile matches direct evaluation") {
  OpParams p;
  p.k = 1;
  auto s = spectrum_of(Opcode::P_t_k, p, scalar_type_basis(4, 1));
  std::mt19937_64 rng(3);
  auto sol = random_mode_solution(s, rng, true);
  auto prof = to_profile(sol, s);
  for (double r : {0.5, 1.0, 2.5}) {
    Eigen::VectorXcd v = eval_mode(sol, s, r);
    for (int c = 0; c < s.m_ang; ++c)
      CHECK(std::abs(eval_expsum(prof.q[c], std::log(r)) - v(c)) <= 1e-10 * std::max(1.0, v.norm()));
  }
}

TEST_CASE("three annulus: serial reference and parallel kernel agree") {
  auto modes = nondegenerate_modes(4, 1, 1);
  REQUIRE(modes.size() >= 2);
  double beta = INFINITY;
  for (const auto& m : modes) beta = std::min(beta, m.beta);
  auto fast = three_annulus_verify(modes, 0.45 * beta, 6.0, 1.0, 60, 11, 2);
  auto ref = three_annulus_verify_serial(modes, 0.45 * beta, 6.0, 1.0, 60, 11);
  REQUIRE(fast.grid.size() == ref.grid.size());
  for (std::size_t i = 0; i < ref.grid.size(); ++i) {
    CHECK(fast.grid[i].L == ref.grid[i].L);
    CHECK(fast.grid[i].trials == 60);
    CHECK(fast.grid[i].dichotomy_failures == ref.grid[i].dichotomy_failures);
    CHECK(fast.grid[i].growth_implication_failures == ref.grid[i].growth_implication_failures);
    CHECK(fast.grid[i].decay_implication_failures == ref.grid[i].decay_implication_failures);
    CHECK(fast.grid[i].plus_failures == ref.grid[i].plus_failures);
    CHECK(fast.grid[i].minus_failures == ref.grid[i].minus_failures);
    CHECK(fast.grid[i].turan_failures == ref.grid[i].turan_failures);
  }
  CHECK(fast.L0 == ref.L0);
  // Thread count does not change the counts.
  auto one = three_annulus_verify(modes, 0.45 * beta, 6.0, 1.0, 60, 11, 1);
  for (std::size_t i = 0; i < one.grid.size(); ++i)
    CHECK(one.grid[i].dichotomy_failures == fast.grid[i].dichotomy_failures);
}

TEST_CASE("three annulus on a pure growing mode") {
  // r^2 alone: every growth ratio is L^2.
  auto s = toy_spectrum({2, -5});
  auto rep = three_annulus_verify({s}, 0.9, 10.0, 1.0, 50, 5);
  REQUIRE(rep.L0.has_value());
  for (const auto& c : rep.grid) CHECK(c.growth_implication_failures == 0);
  CHECK_THROWS_AS(three_annulus_verify({toy_spectrum({0, 2})}, 0.5, 10.0, 1.0, 10, 1), PreconditionError);
  CHECK_THROWS_AS(three_annulus_verify({s}, 1.5, 10.0, 1.0, 10, 1), PreconditionError);
}

TEST_CASE("degenerate scan on a small grid") {
  auto rep = degenerate_scan(4, 1, {0.0, 0.05}, 2, 2);
  CHECK(rep.constant_witness);
  CHECK(rep.delta_free_nonzero_t == 0);
  bool zero_at_t = false;
  for (const auto& e : rep.entries)
    if (e.t != 0 && e.zero_roots > 0) zero_at_t = true;
  CHECK(zero_at_t);  // the scan is not vacuous: A0 is populated at t != 0
  auto serial = degenerate_scan_serial(4, 1, {0.0, 0.05}, 2);
  REQUIRE(serial.entries.size() == rep.entries.size());
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    CHECK(serial.entries[i].mode == rep.entries[i].mode);
    CHECK(serial.entries[i].delta_free == rep.entries[i].delta_free);
  }
  CHECK_THROWS_AS(degenerate_scan(4, 2, {0.1}, 1), PreconditionError);
}
