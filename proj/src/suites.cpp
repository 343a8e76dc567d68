#include "ale/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include "ale/basis.hpp"
#include "ale/decay_bootstrap.hpp"
#include "ale/errors.hpp"
#include "ale/expsum.hpp"
#include "ale/flat_kernel.hpp"
#include "ale/indicial.hpp"
#include "ale/mode_ode.hpp"
#include "ale/polytensor.hpp"
#include "ale/seeds.hpp"
#include "ale/symbol.hpp"

namespace ale {

namespace {

using Body = std::function<bool(const SuiteOptions&, std::ostream&)>;

struct Entry {
  SuiteInfo info;
  Body body;
};

std::string sci(double x) {
  std::ostringstream s;
  s << std::setprecision(3) << std::scientific << x;
  return s.str();
}

std::string fix(double x, int digits = 3) {
  std::ostringstream s;
  s << std::setprecision(digits) << std::fixed << x;
  return s.str();
}

QPoly quad(const Q& c0, const Q& c1, const Q& c2) { return QPoly({c0, c1, c2}); }

bool in_range(int n, int k) { return in_theorem_range(n, k); }

// ---------------------------------------------------------------- acceptance

bool closed_form_rates(const SuiteOptions&, std::ostream& out) {
  long checks = 0, bad = 0;
  auto expect = [&](bool ok) {
    ++checks;
    bad += ok ? 0 : 1;
  };
  bool one_everywhere = true;
  for (int n = 3; n <= 8; ++n) {
    std::set<long> E;
    for (int j = 1; j <= 10; ++j) {
      const RatePair r = box_rates(n, Family::typeI, j);
      // Integer forms: 2 a^+- = -(n-4) +- (n-2+2j).
      const long ap = (-(n - 4) + (n - 2 + 2 * j)) / 2, am = (-(n - 4) - (n - 2 + 2 * j)) / 2;
      expect(r.eigen == Q((j + 1) * (j + n - 3)));
      expect(r.center == qfrac(4 - n, 2));
      expect((r.plus - r.center) * (r.plus - r.center) == r.center * r.center + r.eigen);
      expect(r.plus == Q(ap) && r.minus == Q(am));
      E.insert(ap - 1);
      E.insert(am - 1);
    }
    for (int j = 0; j <= 10; ++j) {
      const RatePair r = box_rates(n, Family::typeII, j);
      const long bp = (-(n - 2) + (n - 2 + 2 * j)) / 2, bm = (-(n - 2) - (n - 2 + 2 * j)) / 2;
      expect(r.eigen == Q(j * (j + n - 2)));
      expect(r.center == qfrac(2 - n, 2));
      expect((r.plus - r.center) * (r.plus - r.center) == r.center * r.center + r.eigen);
      expect(r.plus == Q(bp) && r.minus == Q(bm));
      for (long b : {bp, bm}) {
        E.insert(b - 1);
        E.insert(b + 1);
      }
    }
    const ExceptionalSet e = box_exceptional(n, 10);
    expect(e.all_integers);
    expect(e.values == std::vector<long>(E.begin(), E.end()));
    const bool one = std::find(e.values.begin(), e.values.end(), 1L) != e.values.end();
    one_everywhere = one_everywhere && one;
    expect(one);
  }
  out << checks << " exact comparisons, " << bad << " mismatches; 1 in E for every n: "
      << (one_everywhere ? "yes" : "no");
  return bad == 0;
}

bool probing_fidelity(const SuiteOptions& opts, std::ostream& out) {
  long checks = 0, bad = 0;
  auto expect = [&](bool ok) {
    ++checks;
    bad += ok ? 0 : 1;
  };
  const std::vector<Q> ts{Q(0), qfrac(1, 10), qfrac(-3, 20), qfrac(2, 5), qfrac(-2, 5)};
  for (int n = 3; n <= 8; ++n)
    for (int j = 1; j <= 3; ++j) {
      const Q mu = box_rates(n, Family::typeI, j).eigen, nu = box_rates(n, Family::typeII, j).eigen;
      const EulerOperator b1 = probe_euler(Opcode::box, OpParams{}, typeI_basis(n, j));
      expect(b1.P.size() == 1 && b1.P[0][0] == quad(-mu, Q(n - 4), Q(1)));
      const EulerOperator b2 = probe_euler(Opcode::box, OpParams{}, typeII_basis(n, j));
      for (const Q& t : ts) {
        OpParams p;
        p.t = t;
        const EulerOperator e1 = probe_euler(Opcode::box_t, p, typeI_basis(n, j));
        expect(e1.P.size() == 1 && e1.P[0][0] == quad(-(mu - 2 * t), Q(n - 4) - t, Q(1)));
        const EulerOperator e2 = probe_euler(Opcode::box_t, p, typeII_basis(n, j));
        const bool shape = e2.P.size() == 2;
        expect(shape && e2.P[0][0] == quad(-4 * (Q(n - 2) - t / 2 + nu / 4), 2 * (Q(n - 4) - t), Q(2)));
        expect(shape && e2.P[0][1] == QPoly({4 * nu, -nu}));
        expect(shape && e2.P[1][0] == QPoly({Q(n) - t, Q(1)}));
        expect(shape && e2.P[1][1] == quad(-2 * (nu - t), Q(n - 4) - t, Q(1)));
        if (t == 0) expect(shape && b2.P == e2.P);
      }
    }
  double worst = 0;
  long samples = 0;
  for (int n = 3; n <= 8; ++n)
    for (int s = -400; s <= 400; ++s) {
      const double t = s / 1000.0;
      double top = -INFINITY;
      for (const auto& r : boxt_rates(n, t, Family::typeI, 1)) top = std::max(top, r.value.real());
      worst = std::max(worst, std::abs(top - 1 - 1));
      ++samples;
    }
  out << checks << " exact polynomial comparisons, " << bad << " mismatches; max |c_1^+(t) - 1 - 1| = " << sci(worst)
      << " over " << samples << " (n, t) samples";
  return bad == 0 && worst < opts.tolerance;
}

bool divfree_all_modes(const SuiteOptions& opts, std::ostream& out) {
  const auto checks = divfree_sweep(8, opts.jobs);
  std::map<DivfreeMode, int> per_mode;
  long bad = 0;
  for (const auto& c : checks) {
    ++per_mode[c.result.mode];
    if (c.result.dimension != 0 || c.field_dimension != 0 || !c.result.identities_implied) ++bad;
  }
  out << checks.size() << " (n, k, mode) cases, " << bad << " with a nonzero kernel or route disagreement;";
  for (const auto& [m, c] : per_mode) out << " " << to_string(m) << "=" << c;
  return bad == 0 && per_mode.size() == 4;
}

bool symbol_checks(const SuiteOptions& opts, std::ostream& out) {
  const SymbolSweepReport r = symbol_sweep(1000, opts.seed, opts.jobs);
  out << r.trials << " trials; Lie residual " << sci(r.lie_residual) << ", scalar Lie residual "
      << sci(r.scalar_lie_residual) << ", reduction residual " << sci(r.reduction_residual);
  return r.trials == 1000 && r.lie_residual < opts.tolerance && r.scalar_lie_residual < opts.tolerance &&
         r.reduction_residual < opts.tolerance;
}

bool turan_suite(const SuiteOptions& opts, std::ostream& out) {
  const TuranSweepReport r = turan_sweep(10000, 1000, 1000, opts.seed, TuranTable::shipped(), opts.jobs);
  out << "discrete " << r.discrete_violations << "/" << r.discrete_trials << " (worst ratio " << fix(r.discrete_worst)
      << "), integral " << r.integral_violations << "+" << r.corollary_violations << "/" << r.integral_trials
      << " (worst " << fix(r.integral_worst) << "), interval growth " << r.growth_violations << " decay "
      << r.decay_violations << "/" << r.interval_trials << " (worst " << fix(r.interval_worst) << ")";
  return r.discrete_trials == 10000 && r.integral_trials == 1000 && r.interval_trials == 1000 &&
         r.discrete_violations + r.integral_violations + r.corollary_violations + r.growth_violations +
                 r.decay_violations ==
             0;
}

constexpr double kAnnulusLmax = 30.0;

bool three_annulus(const SuiteOptions& opts, std::ostream& out) {
  const auto modes = annulus_mode_spectra(4, 1, Q(0), 5, true);
  double worst_L0 = 0, beta_min = INFINITY;
  std::string worst_tag;
  long turan = 0;
  bool all_found = true;
  auto run = [&](const std::vector<IndicialSpectrum>& ms, double beta, const std::string& tag) {
    const ThreeAnnulusReport r = three_annulus_verify(ms, 0.45 * beta, kAnnulusLmax, 1.0, 1000, opts.seed, opts.jobs);
    for (const auto& c : r.grid) turan += c.turan_failures;
    if (!r.L0) {
      all_found = false;
      worst_tag = tag;
      return std::optional<double>{};
    }
    if (*r.L0 > worst_L0) {
      worst_L0 = *r.L0;
      worst_tag = tag;
    }
    return r.L0;
  };
  for (const auto& m : modes) {
    beta_min = std::min(beta_min, m.beta);
    run({m}, m.beta, m.tag);
  }
  const auto combined = run(modes, beta_min, "combined");
  out << modes.size() << " mode spectra, 1000 solutions each; reported L0 = " << fix(worst_L0) << " (" << worst_tag
      << "), combined L0 = " << (combined ? fix(*combined) : std::string("none")) << ", Turan cross-check failures "
      << turan;
  return all_found && turan == 0;
}

bool degenerate(const SuiteOptions& opts, std::ostream& out) {
  const DegenerateReport r = degenerate_scan(4, 1, {-0.1, -0.05, 0.0, 0.05, 0.1}, 6, opts.jobs);
  int populated = 0;
  for (const auto& e : r.entries)
    if (e.t != 0 && e.zero_roots > 0) ++populated;
  out << r.entries.size() << " (t, mode) entries; delta_t-free degenerate solutions at t != 0: "
      << r.delta_free_nonzero_t << "; modes with A0 roots at t != 0: " << populated
      << "; constant witness at t = 0: " << (r.constant_witness ? "found" : "missing");
  return r.delta_free_nonzero_t == 0 && r.constant_witness;
}

bool companion_size(const SuiteOptions&, std::ostream& out) {
  long cases = 0, bad = 0;
  for (auto [n, k] : {std::pair{4, 1}, {6, 1}, {6, 2}})
    for (const Q& t : {Q(0), qfrac(1, 10)})
      for (int j = 2; j <= 3; ++j) {
        OpParams p;
        p.k = k;
        p.t = t;
        const AngularBasis b = scalar_type_basis(n, j);
        const IndicialSpectrum s = indicial_spectrum(probe_euler(Opcode::P_t_k, p, b));
        ++cases;
        if (b.size() != 4 || s.total_multiplicity != 8 * (k + 1) || s.det.degree() != 8 * (k + 1)) ++bad;
      }
  out << cases << " four-family systems over (n, k) in {(4,1), (6,1), (6,2)}, t in {0, 1/10}, j in {2, 3}; " << bad
      << " with total multiplicity != 8(k+1)";
  return bad == 0;
}

bool bootstrap_grid(const SuiteOptions&, std::ostream& out) {
  long runs = 0, bad = 0, kills = 0;
  for (int n = 3; n <= 10; ++n)
    for (int k = 1; 2 * k <= n; ++k) {
      if (!in_range(n, k)) continue;
      for (int b = 1; b < 10 * (n - 2 * k); ++b) {
        const DecayState s = bootstrap_infinity(n, k, qfrac(b, 10));
        ++runs;
        bool ok = s.terminal() && s.order == Q(n - 2 * k);
        for (const auto& h : s.history)
          if (h.verified) {
            ++kills;
            ok = ok && *h.verified;
          }
        bad += ok ? 0 : 1;
      }
      for (int b = 1; b < 20; ++b) {
        const DecayState s = bootstrap_origin(n, k, qfrac(b, 10));
        ++runs;
        bool ok = s.terminal() && s.order == Q(2);
        for (const auto& h : s.history)
          if (h.verified) {
            ++kills;
            ok = ok && *h.verified;
          }
        bad += ok ? 0 : 1;
      }
    }
  out << runs << " runs (infinity and origin), " << bad << " not at the terminal order; " << kills
      << " barrier kills, all verified by the flat kernels: " << (bad == 0 ? "yes" : "no");
  return bad == 0;
}

bool quadratic_fields(const SuiteOptions& opts, std::ostream& out) {
  bool lie_ok = true;
  for (int n = 2; n <= 6; ++n) {
    const LieIsomorphismReport r = quadratic_lie_isomorphism(n);
    lie_ok = lie_ok && r.invertible && r.rank == static_cast<std::size_t>(n * n * (n + 1) / 2);
  }
  std::mt19937_64 rng(derive_seed(opts.seed, 10));
  double lo = INFINITY, hi = -INFINITY;
  for (int trial = 0; trial < 5; ++trial) {
    const QuadraticField X = random_quadratic_field(2 + trial % 3, rng);
    const FlowErrorReport r = quadratic_flow_error(X, {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}, 24, derive_seed(opts.seed, trial));
    lo = std::min(lo, r.slope);
    hi = std::max(hi, r.slope);
  }
  out << "Lie map invertible for n = 2..6: " << (lie_ok ? "yes" : "no") << "; flow-defect slopes in [" << fix(lo, 4)
      << ", " << fix(hi, 4) << "] on 5 random fields";
  return lie_ok && lo >= 1.9 && hi <= 2.1;
}

// ---------------------------------------------------------------- invariants

bool expsum_normalize(const SuiteOptions& opts, std::ostream& out) {
  std::mt19937_64 rng(derive_seed(opts.seed, 101));
  long bad = 0;
  for (int i = 0; i < 500; ++i) {
    ExpSum p = random_sum_with_powers(rng, 1 + i % 5, -2.0, 2.0);
    std::vector<ExpTerm> padded = p.terms();
    for (const auto& t : p.terms()) {
      padded.push_back({t.coeff, t.exponent, t.power});
      padded.push_back({-t.coeff, t.exponent, t.power});
    }
    const ExpSum doubled(padded);
    if (!(normalize(normalize(p)) == normalize(p)) || !(normalize(doubled) == normalize(p))) ++bad;
  }
  out << "500 random sums; " << bad << " where normalizing twice differs or cancelling terms survive";
  return bad == 0;
}

bool expsum_shift(const SuiteOptions& opts, std::ostream& out) {
  std::mt19937_64 rng(derive_seed(opts.seed, 102));
  std::uniform_real_distribution<double> uc(-1.0, 1.0);
  long bad = 0;
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const ExpSum p = random_sum_with_powers(rng, 1 + i % 4, 0.2, 1.5);
    const double c = uc(rng);
    const ExpSum q = shift(p, c);
    for (double t : {0.0, 0.4, 1.3}) {
      const cplx a = eval_expsum(q, t), b = eval_expsum(p, t + c);
      worst = std::max(worst, std::abs(a - b) / (1 + std::abs(b)));
    }
    // Same-length intervals placed one step later carry the same verdict.
    const auto lhs = three_interval(shift(p, 1.0), 1, 1, IntervalMode::growth);
    const auto rhs = three_interval(p, 1, 2, IntervalMode::growth);
    if (lhs.holds != rhs.holds) ++bad;
  }
  out << "200 random sums; max relative re-expansion error " << sci(worst) << "; " << bad << " verdict changes";
  return bad == 0 && worst < 1e-10;
}

bool indicial_t0(const SuiteOptions&, std::ostream& out) {
  double worst = 0;
  for (int n = 3; n <= 8; ++n)
    for (int j = 1; j <= 6; ++j) {
      const RatePair b = box_rates(n, Family::typeI, j);
      double hi = -INFINITY, lo = INFINITY;
      for (const auto& r : boxt_rates(n, 0.0, Family::typeI, j)) {
        hi = std::max(hi, r.value.real());
        lo = std::min(lo, r.value.real());
      }
      worst = std::max({worst, std::abs(hi - to_double(b.plus)), std::abs(lo - to_double(b.minus))});
    }
  out << "max |boxt_rates(t=0) - box_rates| = " << sci(worst) << " over n = 3..8, j = 1..6";
  return worst < 1e-10;
}

bool indicial_power_rule(const SuiteOptions&, std::ostream& out) {
  long cases = 0, bad = 0;
  for (int n = 3; n <= 10; ++n)
    for (int k = 1; k <= n; ++k) {
      if (!in_range(n, k)) continue;
      const ExceptionalSet e = laplacian_power_exceptional(n, k, 15);
      for (long v = -15; v <= 15; ++v) {
        const bool excluded = v <= -1 && v >= 2L * (k + 1) - (n - 1);
        const bool in = std::find(e.values.begin(), e.values.end(), v) != e.values.end();
        ++cases;
        bad += in == !excluded ? 0 : 1;
      }
    }
  out << cases << " (n, k, value) cases against the Z minus {-1, ..., 2(k+1)-(n-1)} rule; " << bad << " mismatches";
  return bad == 0;
}

Poly<double> abs_terms(const Poly<double>& p) {
  Poly<double> out(p.n());
  for (const auto& [m, c] : p.terms()) out.add_term(m, std::abs(c));
  return out;
}

bool indicial_scalar_roots(const SuiteOptions&, std::ostream& out) {
  // Delta^{k+1} (r^z phi_s) evaluated numerically at random points, relative
  // to the size of the individual terms.
  long roots = 0;
  double worst = 0;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 1}, {4, 1}, {5, 1}, {6, 1}, {6, 2}}) {
    for (int s = 0; s <= 3; ++s) {
      const QTensor f = scalar_field(angular_harmonic(n, s));
      for (const auto& rt : roots_exact(scalar_indicial_polynomial(n, k, s))) {
        if (std::abs(rt.value.imag()) > 1e-12) continue;
        const Q z = q_from_decimal(std::round(rt.value.real() * 2) / 2);
        if (std::abs(to_double(z) - rt.value.real()) > 1e-12) continue;
        const DTensor field = to_double(mul_r(f, z));
        const DTensor img = laplacian_power(field, k + 1);
        for (int trial = 0; trial < 5; ++trial) {
          std::vector<double> x(n);
          for (double& c : x) c = g(rng);
          const double v = img[0].eval(x.data()), scale = abs_terms(img[0]).eval(x.data());
          worst = std::max(worst, scale > 0 ? std::abs(v) / scale : std::abs(v));
        }
        ++roots;
      }
    }
  }
  out << roots << " real roots substituted; max relative residual of Delta^{k+1}(r^z phi) " << sci(worst);
  return roots > 0 && worst < 1e-9;
}

bool flat_lie_matches(const SuiteOptions&, std::ostream& out) {
  long bad = 0;
  for (int n = 2; n <= 4; ++n) {
    const LieIsomorphismReport rep = quadratic_lie_isomorphism(n);
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l)
        for (int m = l; m < n; ++m) {
          QTensor X(n, 1);
          X.at({i}) += (l == m ? Q(1) : Q(2)) * (QPolyField::coordinate(n, l) * QPolyField::coordinate(n, m));
          const QTensor L = lie(X);
          const std::size_t col = sym_index(n, l, m) * n + i;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
              QPolyField expect(n);
              for (int c = 0; c < n; ++c) {
                const Q& v = rep.matrix(sym3_index(n, a, b, c), col);
                if (v != 0) expect += v * QPolyField::coordinate(n, c);
              }
              bad += L.at({a, b}) == expect ? 0 : 1;
            }
        }
  }
  out << "assembled Lie matrix against L_X g0 on every basis field, n = 2..4: " << bad << " mismatches";
  return bad == 0;
}

bool flat_identities(const SuiteOptions&, std::ostream& out) {
  long cases = 0, bad = 0;
  for (int n = 3; n <= 10; ++n)
    for (int k = 1; 2 * k <= n; ++k) {
      if (!in_range(n, k)) continue;
      const DivfreeResult r = divfree_nullspace(n, k, DivfreeMode::degree1);
      ++cases;
      bad += r.identities_implied && r.dimension == 0 ? 0 : 1;
    }
  out << cases << " degree1 systems up to n = 10; " << bad
      << " where A_pjp = 0 or A_ljm + A_mjl = 0 is not implied";
  return bad == 0;
}

bool symbol_homogeneity(const SuiteOptions& opts, std::ostream& out) {
  const SymbolSweepReport r = symbol_sweep(1000, derive_seed(opts.seed, 103), opts.jobs);
  out << "homogeneity residual " << sci(r.homogeneity_residual) << " over " << r.trials << " trials";
  return r.homogeneity_residual < opts.tolerance;
}

bool symbol_position_space(const SuiteOptions&, std::ostream& out) {
  // sum_{|a|=4} xi^a / a! P(x^a E) = S(xi) E for the quartic operator.
  double worst = 0;
  for (int n : {3, 4}) {
    std::mt19937_64 rng(n);
    std::uniform_int_distribution<int> u(-3, 3);
    std::vector<std::vector<int>> quartic;
    std::vector<int> a(n, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == n - 1) {
        a[pos] = left;
        quartic.push_back(a);
        return;
      }
      for (int c = left; c >= 0; --c) {
        a[pos] = c;
        rec(pos + 1, left - c);
      }
    };
    rec(0, 4);
    for (int trial = 0; trial < 3; ++trial) {
      Eigen::VectorXd xi(n);
      for (int i = 0; i < n; ++i) xi(i) = u(rng);
      QMatrix E(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) E(i, j) = E(j, i) = Q(u(rng));
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
      for (const auto& alpha : quartic) {
        QPolyField mono = QPolyField::constant(n, Q(1));
        double weight = 1;
        for (int i = 0; i < n; ++i)
          for (int p = 0; p < alpha[i]; ++p) {
            mono = mono * QPolyField::coordinate(n, i);
            weight *= xi(i) / (p + 1);
          }
        QTensor h(n, 2);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) h.at({i, j}) = E(i, j) * mono;
        const QTensor img = lin_bach(h, 1);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const auto& c = img.at({i, j});
            for (const auto& [m, v] : c.terms())
              if (m.degree() == 0) acc(i, j) += weight * to_double(v);
          }
      }
      SymbolInput in;
      in.n = n;
      in.k = 1;
      in.xi = xi;
      in.hhat.resize(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) in.hhat(i, j) = to_double(E(i, j));
      const Eigen::MatrixXcd S = linearized_obstruction_symbol(in);
      worst = std::max(worst, (acc - S).norm() / std::max(1.0, S.norm()));
    }
  }
  out << "quartic monomials through the position-space operator vs the symbol, n = 3, 4: relative residual "
      << sci(worst);
  return worst < 1e-12;
}

QTensor random_oneform(int n, std::mt19937_64& rng, int deg) {
  std::uniform_int_distribution<int> u(-2, 2), idx(0, n - 1);
  QTensor w(n, 1);
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < 3; ++t) {
      Mono m;
      for (int d = 0; d < deg; ++d) m.alpha[idx(rng)] += 1;
      m.gamma = Q(u(rng) - 1);
      w[i].add_term(m, Q(u(rng)));
    }
  return w;
}

bool polytensor_box(const SuiteOptions& opts, std::ostream& out) {
  std::mt19937_64 rng(derive_seed(opts.seed, 104));
  long bad_box = 0, bad_t = 0, bad_delta = 0;
  const Q t = qfrac(1, 10);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 4;
    const QTensor w = random_oneform(n, rng, 1 + trial % 3);
    const QTensor l = lie(w);
    bad_box += box(w) == div(l) ? 0 : 1;
    QTensor expect = div(l), ir = i_radial(l);
    ir *= Q(-t);
    expect += ir;
    bad_t += box_t(w, t) == expect ? 0 : 1;
    bad_delta += delta_t(l, t) == expect ? 0 : 1;
  }
  out << "200 random 1-forms: box != delta L g0 in " << bad_box << ", box_t mismatches " << bad_t
      << ", delta_t != delta - t i_{dr/r} in " << bad_delta;
  return bad_box + bad_t + bad_delta == 0;
}

bool polytensor_divergence(const SuiteOptions&, std::ostream& out) {
  // Separated input f(r) T with T radially parallel and homogeneous of
  // degree 0: div(r^g dr dr) = (g + n - 1) r^{g-1} dr.
  long bad = 0;
  for (int n = 3; n <= 6; ++n)
    for (int g = -3; g <= 3; ++g) {
      const QTensor dr = radial_covector<Q>(n);
      const QTensor h = mul_r(outer(dr, dr), Q(g));
      QTensor expect = mul_r(dr, Q(g - 1));
      expect *= Q(g + n - 1);
      bad += div(h) == expect ? 0 : 1;
      // div(r^g g0) = g r^{g-1} dr
      QTensor e2 = mul_r(dr, Q(g - 1));
      e2 *= Q(g);
      bad += div(mul_r(metric<Q>(n), Q(g))) == e2 ? 0 : 1;
    }
  out << "polar divergence of r^g dr dr and r^g g0, n = 3..6, g = -3..3: " << bad << " mismatches";
  return bad == 0;
}

bool polytensor_kernels(const SuiteOptions&, std::ostream& out) {
  long checked = 0, bad = 0;
  auto expect_zero = [&](const QTensor& t) {
    ++checked;
    bad += t.is_zero() ? 0 : 1;
  };
  long second_family = 0;
  for (int n = 3; n <= 6; ++n) {
    // Rotations are Killing; r^{a+-} psi with r psi a rotation, j = 1.
    QTensor om(n, 1);
    om[1] = QPolyField::coordinate(n, 0);
    om[0] = QPolyField::coordinate(n, 1);
    om[0] *= Q(-1);
    expect_zero(lie(om));
    const QTensor psi = mul_r(om, Q(-2));
    const RatePair a = box_rates(n, Family::typeI, 1);
    expect_zero(box(mul_r(psi, a.plus)));
    expect_zero(box(mul_r(psi, a.minus)));
    // r dr: conformal Killing, L g0 = 2 g0, in the kernel of box.
    const QTensor rdr = position_covector<Q>(n);
    QTensor two_g = metric<Q>(n);
    two_g *= Q(2);
    ++checked;
    bad += lie(rdr) == two_g ? 0 : 1;
    expect_zero(box(rdr));
    for (int j = 1; j <= 3; ++j) {
      const QPolyField phi = angular_harmonic(n, j);
      const QTensor dphi = grad(scalar_field(phi));
      const QTensor phidr = mul_poly(radial_covector<Q>(n), phi);
      const RatePair b = box_rates(n, Family::typeII, j);
      for (const Q& bb : {b.plus, b.minus}) {
        // r^b dphi + b r^{b-1} phi dr
        QTensor x = mul_r(phidr, bb - 1);
        x *= bb;
        x += mul_r(dphi, bb);
        expect_zero(box(x));
        // second family: r^{b+2} dphi and r^{b+1} phi dr combine into a kernel element
        const auto A = coordinates(box(mul_r(dphi, bb + 2))), B = coordinates(box(mul_r(phidr, bb + 1)));
        if (A.empty() || B.empty()) continue;
        Q lambda;
        bool ok = A.size() == B.size(), have = false;
        for (const auto& [key, v] : B) {
          auto it = A.find(key);
          if (it == A.end()) {
            ok = false;
            break;
          }
          const Q l = -v / it->second;
          if (have && l != lambda) ok = false;
          lambda = l;
          have = true;
        }
        if (ok) ++second_family;
      }
    }
    // sph2 at nu = 2n: 2 r phi dr + r^2 dphi, phi of degree 2.
    const QPolyField phi2 = angular_harmonic(n, 2);
    QTensor s2 = mul_r(mul_poly(radial_covector<Q>(n), phi2), Q(1));
    s2 *= Q(2);
    s2 += mul_r(grad(scalar_field(phi2)), Q(2));
    expect_zero(box(s2));
  }
  out << checked << " closed-form kernel elements, " << bad << " with a nonzero image; second type II family solved in "
      << second_family << " (n, j, b) cases";
  return bad == 0 && second_family > 0;
}

bool polytensor_moments(const SuiteOptions&, std::ostream& out) {
  long checks = 0, bad = 0;
  for (int n = 2; n <= 5; ++n) {
    std::vector<int> al(n, 0);
    long combos = 1;
    for (int i = 0; i < n; ++i) combos *= 5;
    for (long s = 0; s < combos; ++s) {
      long rem = s;
      int tot = 0;
      for (int i = 0; i < n; ++i) {
        al[i] = static_cast<int>(rem % 5);
        rem /= 5;
        tot += al[i];
      }
      if (tot > 8) continue;
      for (int i = 0; i < n; ++i) {
        if (tot + 2 > 10) continue;
        auto up = al;
        up[i] += 2;
        ++checks;
        bad += sphere_moment_normalized(n, up) == qfrac(al[i] + 1, n + tot) * sphere_moment_normalized(n, al) ? 0 : 1;
      }
    }
  }
  out << checks << " recursion instances with |alpha| <= 8: " << bad << " mismatches";
  return bad == 0;
}

bool polytensor_parallel(const SuiteOptions&, std::ostream& out) {
  long bad = 0;
  for (int n = 3; n <= 6; ++n) {
    const QTensor dr = radial_covector<Q>(n);
    const QTensor drdr = outer(dr, dr), gt = metric<Q>(n) - drdr;
    const QTensor psi = [&] {
      QTensor om(n, 1);
      om[1] = QPolyField::coordinate(n, 0);
      om[0] = QPolyField::coordinate(n, 1);
      om[0] *= Q(-1);
      return mul_r(om, Q(-1));
    }();
    for (const auto& [a, b] : std::vector<std::pair<QTensor, QTensor>>{{drdr, drdr}, {gt, gt}, {gt, drdr}, {psi, psi}}) {
      const auto prof = angular_inner_product(a, b);
      bool flat = true;
      for (const auto& [g, c] : prof) flat = flat && (g == 0 || c == 0);
      bad += flat ? 0 : 1;
    }
  }
  out << "angular inner products of radially parallel fields, n = 3..6: " << bad << " depend on r";
  return bad == 0;
}

bool mode_multiplicity(const SuiteOptions&, std::ostream& out) {
  long cases = 0, bad = 0;
  OpParams p;
  p.k = 1;
  p.t = qfrac(1, 10);
  for (int j = 0; j <= 3; ++j)
    for (const auto& b : two_tensor_modes(4, j, p)) {
      const IndicialSpectrum s = indicial_spectrum(probe_euler(Opcode::P_t_k, p, b));
      ++cases;
      bool ok = s.total_multiplicity == s.m_ang * s.order;
      for (const auto& r : s.roots) ok = ok && r.residual < 1e-10;
      bad += ok ? 0 : 1;
    }
  out << cases << " mode systems at n = 4, k = 1, t = 1/10: " << bad << " with total multiplicity != m_ang * order";
  return bad == 0;
}

bool mode_p0_roots(const SuiteOptions&, std::ostream& out) {
  long roots = 0, bad = 0;
  OpParams p;
  p.k = 1;
  for (int j = 0; j <= 3; ++j) {
    const IndicialSpectrum s = indicial_spectrum(probe_euler(Opcode::P_t_k, p, scalar_type_basis(4, j)));
    for (const auto& r : s.roots) {
      bool found = false;
      for (int deg = std::max(0, j - 2); deg <= j + 2; ++deg)
        for (const auto& q : roots_exact(scalar_indicial_polynomial(4, 1, deg)))
          found = found || std::abs(q.value - r.value) < 1e-9;
      ++roots;
      bad += found ? 0 : 1;
    }
  }
  out << roots << " roots of P_0 on scalar-type modes, " << bad << " outside the scalar indicial roots";
  return bad == 0;
}

bool mode_beta(const SuiteOptions&, std::ostream& out) {
  long modes = 0, bad = 0;
  double lo = INFINITY;
  for (const Q& t : {qfrac(1, 20), qfrac(-1, 20)}) {
    OpParams p;
    p.k = 1;
    p.t = t;
    for (int j = 0; j <= 4; ++j)
      for (const auto& b : two_tensor_modes(4, j, p)) {
        const double beta = indicial_spectrum(probe_euler(Opcode::P_t_k, p, b)).beta;
        ++modes;
        lo = std::min(lo, beta);
        bad += beta > 0 ? 0 : 1;
      }
  }
  out << modes << " modes at t = +-1/20: min beta " << fix(lo, 4);
  return bad == 0;
}

bool mode_split(const SuiteOptions& opts, std::ostream& out) {
  OpParams p;
  p.k = 1;
  const IndicialSpectrum s = indicial_spectrum(probe_euler(Opcode::P_t_k, p, scalar_type_basis(4, 2)));
  std::mt19937_64 rng(derive_seed(opts.seed, 105));
  std::uniform_real_distribution<double> radius(0.2, 5.0);
  double worst = 0;
  for (int draw = 0; draw < 5; ++draw) {
    const ModeSolution sol = random_mode_solution(s, rng, false);
    const SolutionSplit sp = solution_split(sol, s);
    for (int i = 0; i < 100; ++i) {
      const double r = radius(rng);
      const Eigen::VectorXcd whole = eval_mode(sol, s, r);
      const Eigen::VectorXcd parts = eval_mode(sp.plus, s, r) + eval_mode(sp.minus, s, r) + eval_mode(sp.zero, s, r);
      worst = std::max(worst, (whole - parts).norm() / std::max(1.0, whole.norm()));
    }
  }
  out << "h+ + h- + h0 vs h at 500 random radii: max relative error " << sci(worst);
  return worst < 1e-12;
}

bool mode_dichotomy(const SuiteOptions& opts, std::ostream& out) {
  const auto modes = annulus_mode_spectra(4, 1, Q(0), 3, false);
  double beta = INFINITY;
  for (const auto& m : modes) beta = std::min(beta, m.beta);
  const ThreeAnnulusReport fast = three_annulus_verify(modes, 0.45 * beta, kAnnulusLmax, 1.0, 100, opts.seed, opts.jobs);
  const ThreeAnnulusReport ref = three_annulus_verify_serial(modes, 0.45 * beta, kAnnulusLmax, 1.0, 100, opts.seed);
  long after = 0, disagree = 0;
  for (std::size_t i = 0; i < fast.grid.size(); ++i) {
    const auto& c = fast.grid[i];
    if (fast.L0 && c.L >= *fast.L0) after += c.dichotomy_failures;
    disagree += c.dichotomy_failures != ref.grid[i].dichotomy_failures ||
                        c.growth_implication_failures != ref.grid[i].growth_implication_failures
                    ? 1
                    : 0;
  }
  out << "combined n = 4 modes, 100 draws: dichotomy failures beyond L0 " << after
      << "; grid points where the tabulated kernel and the serial reference disagree " << disagree;
  return fast.L0.has_value() && after == 0 && disagree == 0;
}

bool bootstrap_monotone(const SuiteOptions&, std::ostream& out) {
  long bad = 0, pairs = 0;
  for (int n = 3; n <= 10; ++n)
    for (int k = 1; 2 * k <= n; ++k) {
      if (!in_range(n, k)) continue;
      for (Regime reg : {Regime::infinity, Regime::origin}) {
        Q prev = remainder_order(k, n, qfrac(1, 20), reg);
        for (int i = 2; i <= 200; ++i) {
          const Q cur = remainder_order(k, n, qfrac(i, 20), reg);
          ++pairs;
          bad += cur > prev ? 0 : 1;
          prev = cur;
        }
      }
    }
  out << pairs << " consecutive h_order pairs: " << bad << " monotonicity violations";
  return bad == 0;
}

bool bootstrap_steps(const SuiteOptions&, std::ostream& out) {
  long runs = 0, bad = 0;
  for (int n = 3; n <= 10; ++n)
    for (int k = 1; 2 * k <= n; ++k) {
      if (!in_range(n, k)) continue;
      for (int b = 1; b < 10 * (n - 2 * k); ++b) {
        const Q beta0 = qfrac(b, 10);
        const DecayState s = bootstrap_infinity(n, k, beta0);
        int m = 0;
        for (Q p = 1; p < Q(n - 2 * k) / beta0; p *= 2) ++m;
        const int barriers = static_cast<int>(s.barriers.size()) + (n == 2 * (k + 1) ? 1 : 0);
        ++runs;
        bad += static_cast<int>(s.history.size()) <= m + barriers ? 0 : 1;
      }
    }
  out << runs << " runs: " << bad << " exceed ceil(log2((n-2k)/beta0)) + barriers steps";
  return bad == 0;
}

bool bootstrap_crosscheck(const SuiteOptions&, std::ostream& out) {
  long kills = 0, bad = 0;
  for (int n = 3; n <= 10; ++n)
    for (int k = 1; 2 * k <= n; ++k) {
      if (!in_range(n, k)) continue;
      const DecayState s = bootstrap_infinity(n, k, qfrac(1, 10));
      for (const auto& h : s.history) {
        if (!h.verified) continue;
        ++kills;
        DivfreeMode mode = DivfreeMode::degree1;
        if (h.mechanism.rfind("log", 0) == 0)
          mode = DivfreeMode::log;
        else if (h.mechanism.rfind("degree-0", 0) == 0)
          mode = DivfreeMode::degree0;
        const bool direct = divfree_nullspace(n, k, mode).dimension == 0;
        bad += direct == *h.verified && direct ? 0 : 1;
      }
      const DecayState o = bootstrap_origin(n, k, qfrac(1, 10));
      for (const auto& h : o.history)
        if (h.verified) {
          ++kills;
          bad += quadratic_lie_isomorphism(n).invertible && *h.verified ? 0 : 1;
        }
    }
  out << kills << " kills re-derived directly from the flat kernels: " << bad << " disagreements";
  return bad == 0 && kills > 0;
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {{"1", "indicial", "closed-form spectral data", true, 1}, closed_form_rates},
      {{"2", "mode_ode", "probing fidelity", true, 10}, probing_fidelity},
      {{"3", "flat_kernel", "divergence-free kernels", true, 10}, divfree_all_modes},
      {{"4", "symbol", "symbol checks", true, 0}, symbol_checks},
      {{"5", "expsum", "Turan suite", true, 60}, turan_suite},
      {{"6", "mode_ode", "three annulus", true, 120}, three_annulus},
      {{"7", "mode_ode", "degenerate scan", true, 300}, degenerate},
      {{"8", "mode_ode", "companion size", true, 0}, companion_size},
      {{"9", "decay_bootstrap", "bootstrap", true, 5}, bootstrap_grid},
      {{"10", "flat_kernel", "quadratic-field lemmas", true, 60}, quadratic_fields},
      {{"expsum.normalize", "expsum", "normalization idempotence", false, 0}, expsum_normalize},
      {{"expsum.shift", "expsum", "scale covariance", false, 0}, expsum_shift},
      {{"indicial.t0", "indicial", "boxt_rates at t = 0", false, 0}, indicial_t0},
      {{"indicial.power_rule", "indicial", "Laplacian-power exceptional rule", false, 0}, indicial_power_rule},
      {{"indicial.scalar_roots", "indicial", "scalar indicial roots", false, 0}, indicial_scalar_roots},
      {{"flat.lie_matrix", "flat_kernel", "Lie matrix vs tensor calculus", false, 0}, flat_lie_matches},
      {{"flat.identities", "flat_kernel", "degree1 identities", false, 0}, flat_identities},
      {{"symbol.homogeneity", "symbol", "homogeneity", false, 0}, symbol_homogeneity},
      {{"symbol.position_space", "symbol", "position-space consistency", false, 0}, symbol_position_space},
      {{"polytensor.box", "polytensor", "box and delta_t identities", false, 0}, polytensor_box},
      {{"polytensor.divergence", "polytensor", "polar divergence", false, 0}, polytensor_divergence},
      {{"polytensor.kernels", "polytensor", "closed-form kernel elements", false, 0}, polytensor_kernels},
      {{"polytensor.moments", "polytensor", "sphere moment recursion", false, 0}, polytensor_moments},
      {{"polytensor.parallel", "polytensor", "radially parallel inner products", false, 0}, polytensor_parallel},
      {{"mode.multiplicity", "mode_ode", "multiplicity m_ang * order", false, 0}, mode_multiplicity},
      {{"mode.p0_roots", "mode_ode", "P_0 roots vs scalar roots", false, 0}, mode_p0_roots},
      {{"mode.beta", "mode_ode", "beta > 0 at small t", false, 0}, mode_beta},
      {{"mode.split", "mode_ode", "solution split direct sum", false, 0}, mode_split},
      {{"mode.dichotomy", "mode_ode", "three annulus dichotomy", false, 0}, mode_dichotomy},
      {{"bootstrap.monotone", "decay_bootstrap", "remainder order monotone", false, 0}, bootstrap_monotone},
      {{"bootstrap.steps", "decay_bootstrap", "step bound", false, 0}, bootstrap_steps},
      {{"bootstrap.kills", "decay_bootstrap", "kills vs flat kernels", false, 0}, bootstrap_crosscheck},
  };
  return entries;
}

SuiteResult run_entry(const Entry& e, const SuiteOptions& opts) {
  SuiteResult r;
  r.id = e.info.id;
  r.module = e.info.module;
  r.name = e.info.name;
  r.acceptance = e.info.acceptance;
  r.budget = e.info.budget;
  std::ostringstream detail;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.pass = e.body(opts, detail);
  } catch (const std::exception& ex) {
    r.pass = false;
    r.error = true;
    detail << "error: " << ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.budget > 0 && r.seconds > r.budget) {
    r.pass = false;
    detail << "; over the " << r.budget << " s budget";
  }
  r.detail = detail.str();
  return r;
}

}  // namespace

std::vector<SuiteInfo> suite_catalog() {
  std::vector<SuiteInfo> out;
  for (const auto& e : registry()) out.push_back(e.info);
  return out;
}

SuiteResult run_suite(const std::string& id, const SuiteOptions& opts) {
  for (const auto& e : registry())
    if (e.info.id == id) return run_entry(e, opts);
  throw PreconditionError("unknown suite '" + id + "'");
}

std::vector<SuiteResult> run_acceptance_suites(const SuiteOptions& opts) {
  std::vector<SuiteResult> out;
  for (const auto& e : registry())
    if (e.info.acceptance) out.push_back(run_entry(e, opts));
  return out;
}

std::vector<SuiteResult> run_all_suites(const SuiteOptions& opts) {
  std::vector<SuiteResult> out;
  for (const auto& e : registry()) out.push_back(run_entry(e, opts));
  return out;
}

}  // namespace ale
