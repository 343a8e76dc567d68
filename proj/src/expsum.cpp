#include "ale/expsum.hpp"

#include <algorithm>
#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <numbers>

#include "ale/errors.hpp"
#include "ale/seeds.hpp"

namespace ale {

namespace {

bool term_less(const ExpTerm& a, const ExpTerm& b) {
  if (a.exponent.real() != b.exponent.real()) return a.exponent.real() < b.exponent.real();
  if (a.exponent.imag() != b.exponent.imag()) return a.exponent.imag() < b.exponent.imag();
  return a.power < b.power;
}

void check_interval(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b, "interval needs a < b");
  double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  require((b - a) / scale >= 1e-8, "interval too narrow (relative width < 1e-8)");
}

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

cplx integral_power_exp(int m, cplx lambda, double a, double b) {
  const double reach = std::abs(lambda) * std::max(std::abs(a), std::abs(b));
  if (reach < 4.0 * (m + 1)) {
    // Closed form cancels badly here; panelled Gauss-Legendre instead.
    const int panels = 1 + static_cast<int>(std::abs(lambda) * (b - a) / 2.0);
    const double h = (b - a) / panels;
    cplx acc = 0;
    for (int k = 0; k < panels; ++k) {
      double lo = a + k * h;
      auto re = boost::math::quadrature::gauss<double, 20>::integrate(
          [&](double t) { return std::pow(t, m) * std::exp(lambda.real() * t) * std::cos(lambda.imag() * t); },
          lo, lo + h);
      auto im = boost::math::quadrature::gauss<double, 20>::integrate(
          [&](double t) { return std::pow(t, m) * std::exp(lambda.real() * t) * std::sin(lambda.imag() * t); },
          lo, lo + h);
      acc += cplx(re, im);
    }
    return acc;
  }
  auto F = [&](double t) {
    cplx poly = 0;
    double fall = 1;  // m!/(m-i)!
    cplx lam_pow = lambda;
    for (int i = 0; i <= m; ++i) {
      double sign = (i % 2 == 0) ? 1.0 : -1.0;
      poly += sign * fall * std::pow(t, m - i) / lam_pow;
      fall *= (m - i);
      lam_pow *= lambda;
    }
    return std::exp(lambda * t) * poly;
  };
  return F(b) - F(a);
}

ExpSum::ExpSum(std::vector<ExpTerm> terms) : terms_(std::move(terms)) { *this = normalize(*this); }

int ExpSum::d() const {
  int count = 0;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (i == 0 || terms_[i].exponent != terms_[i - 1].exponent) ++count;
  return count;
}

int ExpSum::bigM() const {
  int M = 0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    bool last_of_group = i + 1 == terms_.size() || terms_[i + 1].exponent != terms_[i].exponent;
    if (last_of_group) M += terms_[i].power;
  }
  return M;
}

double ExpSum::min_re() const {
  double m = INFINITY;
  for (const auto& t : terms_) m = std::min(m, t.exponent.real());
  return m;
}

double ExpSum::max_re() const {
  double m = -INFINITY;
  for (const auto& t : terms_) m = std::max(m, t.exponent.real());
  return m;
}

bool ExpSum::pure() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const ExpTerm& t) { return t.power == 0; });
}

ExpSum normalize(const ExpSum& p) {
  std::vector<ExpTerm> ts = p.terms();
  for (const auto& t : ts) {
    require(t.power >= 0, "ExpTerm power must be nonnegative");
    require(std::isfinite(t.coeff.real()) && std::isfinite(t.coeff.imag()), "ExpTerm coefficient not finite");
    require(std::isfinite(t.exponent.real()) && std::isfinite(t.exponent.imag()), "ExpTerm exponent not finite");
  }
  std::sort(ts.begin(), ts.end(), term_less);
  std::vector<ExpTerm> merged;
  for (const auto& t : ts) {
    if (!merged.empty() && merged.back().exponent == t.exponent && merged.back().power == t.power)
      merged.back().coeff += t.coeff;
    else
      merged.push_back(t);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const ExpTerm& t) { return t.coeff == cplx(0); }),
               merged.end());
  ExpSum out;
  out.terms_ = std::move(merged);
  return out;
}

bool operator==(const ExpSum& a, const ExpSum& b) {
  if (a.terms().size() != b.terms().size()) return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    const auto &x = a.terms()[i], &y = b.terms()[i];
    if (x.coeff != y.coeff || x.exponent != y.exponent || x.power != y.power) return false;
  }
  return true;
}

cplx eval_expsum(const ExpSum& p, double t) {
  require(std::isfinite(t), "eval_expsum: t must be finite");
  cplx acc = 0;
  for (const auto& term : p.terms()) {
    double logmag = term.exponent.real() * t;
    if (term.power > 0 && t != 0.0) logmag += term.power * std::log(std::abs(t));
    if (std::abs(term.coeff) > 0) logmag += std::log(std::abs(term.coeff));
    if (logmag > 700.0) throw RangeError("exponential sum overflows at t = " + std::to_string(t));
    acc += term.coeff * std::pow(t, term.power) * std::exp(term.exponent * t);
  }
  return acc;
}

ExpSum shift(const ExpSum& p, double c) {
  std::vector<ExpTerm> out;
  for (const auto& term : p.terms()) {
    cplx base = term.coeff * std::exp(term.exponent * c);
    for (int i = 0; i <= term.power; ++i)
      out.push_back({base * binom(term.power, i) * std::pow(c, term.power - i), term.exponent, i});
  }
  return ExpSum(std::move(out));
}

double integral_abs2(const ExpSum& p, double a, double b) {
  check_interval(a, b);
  const auto& ts = p.terms();
  cplx acc = 0;
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t k = 0; k < ts.size(); ++k) {
      cplx lam = ts[i].exponent + std::conj(ts[k].exponent);
      acc += ts[i].coeff * std::conj(ts[k].coeff) * integral_power_exp(ts[i].power + ts[k].power, lam, a, b);
    }
  return std::max(0.0, acc.real());
}

double integral_abs2_quad(const ExpSum& p, double a, double b) {
  check_interval(a, b);
  double err = 0, l1 = 0;
  auto f = [&](double t) { return std::norm(eval_expsum(p, t)); };
  double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-10, &err, &l1);
  if (!(err <= std::max(1e-10 * std::abs(val), 1e-14) * 10.0))
    throw NumericError("quadrature did not converge (error estimate " + std::to_string(err) + ")");
  return val;
}

double sup_abs2(const ExpSum& p, double a, double b) {
  require(a <= b, "sup_abs2: a > b");
  constexpr int kSamples = 2048;
  auto f = [&](double t) { return std::norm(eval_expsum(p, t)); };
  if (a == b) return f(a);
  const double h = (b - a) / (kSamples - 1);
  int best = 0;
  double best_val = -1;
  for (int i = 0; i < kSamples; ++i) {
    double v = f(a + i * h);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = a + std::max(0, best - 1) * h, hi = a + std::min(kSamples - 1, best + 1) * h;
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  return std::max({best_val, f1, f2});
}

TuranDiscreteResult turan_discrete(const std::vector<cplx>& z, const std::vector<cplx>& c, int m,
                                   const TuranTable& table) {
  require(!z.empty(), "turan_discrete: empty sum (d = 0)");
  require(z.size() == c.size(), "turan_discrete: z and c differ in length");
  require(m >= 1, "turan_discrete: m must be >= 1");
  for (auto zj : z) require(std::abs(zj) >= 1.0 - 1e-12, "turan_discrete: |z_j| < 1");
  const int d = static_cast<int>(z.size());
  auto S = [&](int l) {
    cplx acc = 0;
    for (int j = 0; j < d; ++j) acc += c[j] * std::pow(z[j], l);
    return acc;
  };
  TuranDiscreteResult r;
  r.d = d;
  r.m = m;
  r.lhs = std::norm(S(0));
  for (int l = m + 1; l <= m + d; ++l) r.rhs = std::max(r.rhs, std::norm(S(l)));
  r.constant = table.discrete_at(d);
  r.constant_bound = r.constant * std::pow(static_cast<double>(m + d) / d, 2.0 * (d - 1));
  r.holds = r.lhs <= r.constant_bound * r.rhs;
  return r;
}

TuranIntegralResult turan_integral(const ExpSum& p, double a, double b, double R, const TuranTable& table) {
  require(!p.empty(), "turan_integral: empty sum");
  require(p.pure(), "turan_integral: powers must all be zero");
  require(p.min_re() >= 0.0, "turan_integral: needs Re zeta_j >= 0");
  require(a > 0 && a < b, "turan_integral: needs 0 < a < b");
  require(R > 0, "turan_integral: needs R > 0");
  TuranIntegralResult r;
  r.d = p.d();
  r.a = a;
  r.b = b;
  r.R = R;
  r.lhs = std::norm(eval_expsum(p, 0.0));
  r.integral = integral_abs2_quad(p, a, b);
  r.constant = table.integral_at(r.d);
  r.bound = r.constant * std::pow(b / (b - a), 2.0 * (r.d - 1)) * (b + a) / ((b - a) * (b - a)) * r.integral;
  r.holds = r.lhs <= r.bound;
  r.corollary_constant = table.corollary_at(r.d);
  r.sup_lhs = sup_abs2(p, 0.0, R);
  r.tail_integral = integral_abs2_quad(p, 1.5 * R, 2.0 * R);
  r.sup_bound = r.corollary_constant / R * r.tail_integral;
  r.sup_holds = r.sup_lhs <= r.sup_bound;
  r.l2_lhs = integral_abs2_quad(p, 0.0, R);
  r.l2_bound = r.corollary_constant * r.tail_integral;
  r.l2_holds = r.l2_lhs <= r.l2_bound;
  return r;
}

ThreeIntervalResult three_interval(const ExpSum& p, double R, int l, IntervalMode mode, const TuranTable& table) {
  require(!p.empty(), "three_interval: empty sum");
  require(R > 0, "three_interval: needs R > 0");
  require(l >= 1, "three_interval: needs l >= 1");
  ThreeIntervalResult r;
  r.d = p.d();
  r.M = p.bigM();
  if (mode == IntervalMode::growth) {
    require(p.min_re() > 0, "three_interval growth: mixed or nonpositive real parts; split the sum first");
    r.lambda = p.min_re();
  } else {
    require(p.max_re() < 0, "three_interval decay: mixed or nonnegative real parts; split the sum first");
    r.lambda = -p.max_re();
  }
  r.constant = table.corollary_at(r.M + r.d);
  const double before = integral_abs2(p, (l - 1) * R, l * R);
  const double after = integral_abs2(p, l * R, (l + 1) * R);
  if (mode == IntervalMode::growth) {
    r.lhs = std::exp(r.lambda * R) * before;
    r.rhs = r.constant * after;
  } else {
    r.lhs = after;
    r.rhs = r.constant * std::exp(-r.lambda * R) * before;
  }
  r.holds = r.lhs <= r.rhs * (1 + 1e-12);
  return r;
}

DiscreteInstance random_discrete_instance(std::mt19937_64& rng, int d, int m_max) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  DiscreteInstance inst;
  inst.m = 1 + static_cast<int>(unit(rng) * m_max);
  if (inst.m > m_max) inst.m = m_max;
  for (int j = 0; j < d; ++j) {
    // Half the nodes sit on the unit circle, where the lemma is tightest.
    double rho = unit(rng) < 0.5 ? 1.0 : 1.0 + 2.0 * unit(rng);
    double theta = 2 * std::numbers::pi * unit(rng);
    inst.z.push_back(std::polar(rho, theta));
    double cr = gauss(rng), ci = gauss(rng);
    inst.c.emplace_back(cr, ci);
  }
  return inst;
}

ExpSum random_pure_sum(std::mt19937_64& rng, int d, double re_lo, double re_hi) {
  std::uniform_real_distribution<double> re(re_lo, re_hi), im(-3.0, 3.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ExpTerm> ts;
  for (int j = 0; j < d; ++j) {
    double zr = re(rng), zi = im(rng), cr = gauss(rng), ci = gauss(rng);
    ts.push_back({cplx(cr, ci), cplx(zr, zi), 0});
  }
  return ExpSum(std::move(ts));
}

ExpSum random_sum_with_powers(std::mt19937_64& rng, int total, double re_lo, double re_hi) {
  // total = M + d: split into distinct exponents, each carrying powers 0..n_j.
  std::uniform_real_distribution<double> re(re_lo, re_hi), im(-3.0, 3.0), unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ExpTerm> ts;
  int left = total;
  while (left > 0) {
    int block = 1 + static_cast<int>(unit(rng) * left);
    if (block > left) block = left;
    double zr = re(rng), zi = im(rng);
    for (int s = 0; s < block; ++s) {
      double cr = gauss(rng), ci = gauss(rng);
      ts.push_back({cplx(cr, ci), cplx(zr, zi), s});
    }
    left -= block;
  }
  return ExpSum(std::move(ts));
}

TuranEstimate estimate_turan_constant(int d, int m_max, long trials, std::uint64_t seed) {
  require(d >= 1, "estimate_turan_constant: d >= 1");
  require(m_max >= 1, "estimate_turan_constant: m_max >= 1");
  require(trials >= 1, "estimate_turan_constant: trials >= 1");
  // The table must not feed into its own estimate; use A = 1 and rescale.
  TuranTable unit_table;
  unit_table.discrete.fill(1.0);
  TuranEstimate est;
  for (long i = 0; i < trials; ++i) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    auto inst = random_discrete_instance(rng, d, m_max);
    // For the drawn nodes pick c maximizing |S_0|^2 / sum_l |S_l|^2, i.e.
    // c = (V^* V)^{-1} 1 with V_{lj} = z_j^{m+1+l}; Gaussian c otherwise.
    Eigen::MatrixXcd V(d, d);
    for (int l = 0; l < d; ++l)
      for (int j = 0; j < d; ++j) V(l, j) = std::pow(inst.z[j], inst.m + 1 + l);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(V.adjoint() * V);
    if (lu.isInvertible()) {
      Eigen::VectorXcd c = lu.solve(Eigen::VectorXcd::Ones(d));
      for (int j = 0; j < d; ++j) inst.c[j] = c(j);
    }
    auto r = turan_discrete(inst.z, inst.c, inst.m, unit_table);
    if (r.rhs == 0.0) {
      ++est.skipped;
      continue;
    }
    est.value = std::max(est.value, r.lhs / (r.constant_bound * r.rhs));
  }
  if (est.skipped == trials) throw NumericError("estimate_turan_constant: every draw had vanishing S_l");
  return est;
}

}  // namespace ale
