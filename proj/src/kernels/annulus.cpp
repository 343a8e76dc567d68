// Three-annulus sweep: one random mode solution per trial, checked on every
// grid value of L. Trials are independent and seeded by index.
//
// The serial reference evaluates every norm through triple_bar_norm and the
// Turan cross-check through three_interval. The parallel kernel uses the fact
// that the exponents of a mode are fixed across trials: the integrals of
// s^{b+b'} e^{(conj z + z') s} over each annulus are tabulated once, and each
// norm becomes a Hermitian form in the coefficients.

#include <omp.h>

#include <array>
#include <cmath>
#include <limits>

#include "ale/errors.hpp"
#include "ale/mode_ode.hpp"
#include "ale/seeds.hpp"

namespace ale {

namespace {

struct Setup {
  std::vector<double> Ls;
  double beta = 0;
};

Setup prepare(const std::vector<IndicialSpectrum>& modes, double beta_prime, double L_max, double a, long trials) {
  require(!modes.empty(), "three_annulus_verify: no modes");
  require(a > 0, "three_annulus_verify: needs a > 0");
  require(trials >= 1, "three_annulus_verify: needs trials >= 1");
  Setup s;
  s.beta = std::numeric_limits<double>::infinity();
  for (const auto& m : modes) {
    if (!m.A_zero.empty())
      throw PreconditionError("three_annulus_verify: mode " + m.tag + " has roots on Re = 0 (degenerate part)");
    s.beta = std::min(s.beta, m.beta);
  }
  require(beta_prime > 0 && beta_prime < s.beta / 2, "three_annulus_verify: needs 0 < beta' < beta/2");
  for (double L = 1.05; L <= L_max * (1 + 1e-12); L *= 1.15) s.Ls.push_back(L);
  require(!s.Ls.empty(), "three_annulus_verify: needs L_max >= 1.5");
  return s;
}

void append(ModeProfile& into, const ModeProfile& p) {
  into.weights.insert(into.weights.end(), p.weights.begin(), p.weights.end());
  into.q.insert(into.q.end(), p.q.begin(), p.q.end());
}

bool turan_family_ok(const ExpSum& q, double a, double L, IntervalMode mode) {
  ExpSum p = normalize(q);
  if (p.empty()) return true;
  if (p.bigM() + p.d() > TuranTable::kMaxD) return true;  // no tabulated constant; nothing to compare
  return three_interval(shift(p, std::log(a)), std::log(L), 1, mode).holds;
}

void run_trial(const std::vector<IndicialSpectrum>& modes, const Setup& s, double bp, double a, std::uint64_t seed,
               long trial, std::vector<AnnulusCheck>& acc) {
  std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
  ModeProfile h, hp, hm;
  for (const auto& spec : modes) {
    ModeSolution sol = random_mode_solution(spec, rng, true);
    SolutionSplit sp = solution_split(sol, spec);
    append(h, to_profile(sol, spec));
    append(hp, to_profile(sp.plus, spec));
    append(hm, to_profile(sp.minus, spec));
  }
  for (std::size_t i = 0; i < s.Ls.size(); ++i) {
    const double L = s.Ls[i], g = std::pow(L, bp);
    const double r0 = a, r1 = a * L, r2 = r1 * L, r3 = r2 * L;
    const double N1 = triple_bar_norm(h, r0, r1), N2 = triple_bar_norm(h, r1, r2), N3 = triple_bar_norm(h, r2, r3);
    const bool eq12 = N2 >= g * N1, eq13 = N3 >= g * N2, eq14 = N3 <= N2 / g, eq15 = N2 <= N1 / g;
    AnnulusCheck& c = acc[i];
    ++c.trials;
    if (eq12 && !eq13) ++c.growth_implication_failures;
    if (eq14 && !eq15) ++c.decay_implication_failures;
    if (!eq13 && !eq15) ++c.dichotomy_failures;
    if (triple_bar_norm(hp, r1, r2) < g * triple_bar_norm(hp, r0, r1)) ++c.plus_failures;
    if (triple_bar_norm(hm, r1, r2) > triple_bar_norm(hm, r0, r1) / g) ++c.minus_failures;
    bool turan = true;
    for (const auto& q : hp.q) turan = turan && turan_family_ok(q, a, L, IntervalMode::growth);
    for (const auto& q : hm.q) turan = turan && turan_family_ok(q, a, L, IntervalMode::decay);
    if (!turan) ++c.turan_failures;
  }
}

// Root/log-power slots of one mode: slot k carries s^{power[k]} e^{zeta[k] s}.
struct ModeTable {
  std::vector<cplx> zeta;
  std::vector<int> power, root;
  std::vector<int> sign;  // +1, -1 by Re zeta
  // gram[i][iv]: K x K, interval iv of grid value i.
  std::vector<std::array<Eigen::MatrixXcd, 3>> gram;
};

std::vector<ModeTable> tabulate(const std::vector<IndicialSpectrum>& modes, const Setup& s, double a) {
  const double s0 = std::log(a);
  std::vector<ModeTable> out;
  for (const auto& spec : modes) {
    ModeTable t;
    for (std::size_t r = 0; r < spec.roots.size(); ++r)
      for (int b = 0; b < spec.roots[r].multiplicity; ++b) {
        t.zeta.push_back(spec.roots[r].value);
        t.power.push_back(b);
        t.root.push_back(static_cast<int>(r));
        t.sign.push_back(spec.roots[r].value.real() > 0 ? 1 : -1);
      }
    const Eigen::Index K = static_cast<Eigen::Index>(t.zeta.size());
    for (double L : s.Ls) {
      const double R = std::log(L);
      std::array<Eigen::MatrixXcd, 3> g;
      for (int iv = 0; iv < 3; ++iv) {
        g[iv].resize(K, K);
        for (Eigen::Index k = 0; k < K; ++k)
          for (Eigen::Index l = k; l < K; ++l) {
            cplx v = integral_power_exp(t.power[k] + t.power[l], std::conj(t.zeta[k]) + t.zeta[l], s0 + iv * R,
                                        s0 + (iv + 1) * R);
            g[iv](k, l) = v;
            g[iv](l, k) = std::conj(v);
          }
      }
      t.gram.push_back(std::move(g));
    }
    out.push_back(std::move(t));
  }
  return out;
}

double form(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& v) { return std::max(0.0, v.dot(G * v).real()); }

// Growth/decay inequality of three_interval evaluated on tabulated integrals.
bool turan_family_fast(const ModeTable& t, const Eigen::VectorXcd& v, int sgn, double before, double after,
                       double R) {
  std::vector<int> top(t.zeta.size(), -1);
  double lambda = std::numeric_limits<double>::infinity();
  int d = 0, M = 0, last_root = -1;
  for (std::size_t k = 0; k < t.zeta.size(); ++k) {
    if (t.sign[k] != sgn || v(k) == cplx(0)) continue;
    if (t.root[k] != last_root) {
      ++d;
      last_root = t.root[k];
      lambda = std::min(lambda, std::abs(t.zeta[k].real()));
    }
    top[t.root[k]] = std::max(top[t.root[k]], t.power[k]);
  }
  if (d == 0) return true;
  for (int p : top) M += std::max(p, 0);
  if (M + d > TuranTable::kMaxD) return true;
  const double C = TuranTable::shipped().corollary_at(M + d);
  const double lhs = sgn > 0 ? std::exp(lambda * R) * before : after;
  const double rhs = sgn > 0 ? C * after : C * std::exp(-lambda * R) * before;
  return lhs <= rhs * (1 + 1e-12);
}

void run_trial_fast(const std::vector<IndicialSpectrum>& modes, const std::vector<ModeTable>& tables, const Setup& s,
                    double bp, std::uint64_t seed, long trial, std::vector<AnnulusCheck>& acc) {
  std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
  // Per mode and family: full, plus and minus coefficient vectors over the slots.
  struct Fam {
    std::size_t mode;
    double w;
    Eigen::VectorXcd full, plus, minus;
  };
  std::vector<Fam> fams;
  for (std::size_t mi = 0; mi < modes.size(); ++mi) {
    const auto& spec = modes[mi];
    const auto& t = tables[mi];
    ModeSolution sol = random_mode_solution(spec, rng, true);
    for (int c = 0; c < spec.m_ang; ++c) {
      Fam f{mi, spec.weights[c], Eigen::VectorXcd(t.zeta.size()), Eigen::VectorXcd::Zero(t.zeta.size()),
            Eigen::VectorXcd::Zero(t.zeta.size())};
      for (std::size_t k = 0; k < t.zeta.size(); ++k) {
        f.full(k) = sol.d[t.root[k]][t.power[k]](c);
        (t.sign[k] > 0 ? f.plus : f.minus)(k) = f.full(k);
      }
      fams.push_back(std::move(f));
    }
  }
  for (std::size_t i = 0; i < s.Ls.size(); ++i) {
    const double L = s.Ls[i], g = std::pow(L, bp), R = std::log(L);
    double n1 = 0, n2 = 0, n3 = 0, p1 = 0, p2 = 0, m1 = 0, m2 = 0;
    bool turan = true;
    for (const auto& f : fams) {
      const auto& G = tables[f.mode].gram[i];
      n1 += f.w * form(G[0], f.full);
      n2 += f.w * form(G[1], f.full);
      n3 += f.w * form(G[2], f.full);
      const double fp1 = form(G[0], f.plus), fp2 = form(G[1], f.plus);
      const double fm1 = form(G[0], f.minus), fm2 = form(G[1], f.minus);
      p1 += f.w * fp1;
      p2 += f.w * fp2;
      m1 += f.w * fm1;
      m2 += f.w * fm2;
      turan = turan && turan_family_fast(tables[f.mode], f.plus, 1, fp1, fp2, R) &&
              turan_family_fast(tables[f.mode], f.minus, -1, fm1, fm2, R);
    }
    const double N1 = std::sqrt(n1), N2 = std::sqrt(n2), N3 = std::sqrt(n3);
    const bool eq12 = N2 >= g * N1, eq13 = N3 >= g * N2, eq14 = N3 <= N2 / g, eq15 = N2 <= N1 / g;
    AnnulusCheck& c = acc[i];
    ++c.trials;
    if (eq12 && !eq13) ++c.growth_implication_failures;
    if (eq14 && !eq15) ++c.decay_implication_failures;
    if (!eq13 && !eq15) ++c.dichotomy_failures;
    if (std::sqrt(p2) < g * std::sqrt(p1)) ++c.plus_failures;
    if (std::sqrt(m2) > std::sqrt(m1) / g) ++c.minus_failures;
    if (!turan) ++c.turan_failures;
  }
}

ThreeAnnulusReport finish(const Setup& s, double bp, double a, long trials, std::uint64_t seed,
                          std::vector<AnnulusCheck> grid) {
  ThreeAnnulusReport rep;
  rep.beta = s.beta;
  rep.beta_prime = bp;
  rep.a = a;
  rep.trials = trials;
  rep.seed = seed;
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i].L = s.Ls[i];
  for (std::size_t i = grid.size(); i-- > 0;) {
    if (!grid[i].pass()) break;
    rep.L0 = grid[i].L;
  }
  rep.grid = std::move(grid);
  return rep;
}

void merge(std::vector<AnnulusCheck>& into, const std::vector<AnnulusCheck>& from) {
  for (std::size_t i = 0; i < into.size(); ++i) {
    into[i].trials += from[i].trials;
    into[i].growth_implication_failures += from[i].growth_implication_failures;
    into[i].decay_implication_failures += from[i].decay_implication_failures;
    into[i].dichotomy_failures += from[i].dichotomy_failures;
    into[i].plus_failures += from[i].plus_failures;
    into[i].minus_failures += from[i].minus_failures;
    into[i].turan_failures += from[i].turan_failures;
  }
}

}  // namespace

ThreeAnnulusReport three_annulus_verify_serial(const std::vector<IndicialSpectrum>& modes, double beta_prime,
                                               double L_max, double a, long trials, std::uint64_t seed) {
  Setup s = prepare(modes, beta_prime, L_max, a, trials);
  std::vector<AnnulusCheck> grid(s.Ls.size());
  for (long t = 0; t < trials; ++t) run_trial(modes, s, beta_prime, a, seed, t, grid);
  return finish(s, beta_prime, a, trials, seed, std::move(grid));
}

ThreeAnnulusReport three_annulus_verify(const std::vector<IndicialSpectrum>& modes, double beta_prime, double L_max,
                                        double a, long trials, std::uint64_t seed, int jobs) {
  Setup s = prepare(modes, beta_prime, L_max, a, trials);
  const std::vector<ModeTable> tables = tabulate(modes, s, a);
  std::vector<AnnulusCheck> grid(s.Ls.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
  {
    std::vector<AnnulusCheck> local(s.Ls.size());
#pragma omp for schedule(dynamic, 8)
    for (long t = 0; t < trials; ++t) run_trial_fast(modes, tables, s, beta_prime, seed, t, local);
#pragma omp critical
    merge(grid, local);
  }
  return finish(s, beta_prime, a, trials, seed, std::move(grid));
}

}  // namespace ale
