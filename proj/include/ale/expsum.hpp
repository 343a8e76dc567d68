#pragma once

// Exponential sums p(t) = sum c_{j,s} t^s e^{zeta_j t} and the Turan-type
// inequalities built on them.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "ale/turan_table.hpp"

namespace ale {

using cplx = std::complex<double>;

struct ExpTerm {
  cplx coeff;
  cplx exponent;
  int power = 0;
};

class ExpSum {
 public:
  ExpSum() = default;
  explicit ExpSum(std::vector<ExpTerm> terms);  // normalizes

  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int d() const;     // distinct exponents
  int bigM() const;  // sum over exponents of the largest power
  double min_re() const;
  double max_re() const;
  bool pure() const;  // every power is zero

 private:
  friend ExpSum normalize(const ExpSum& p);
  std::vector<ExpTerm> terms_;
};

// Merge equal (exponent, power) pairs, drop zero coefficients, sort.
ExpSum normalize(const ExpSum& p);
bool operator==(const ExpSum& a, const ExpSum& b);

cplx eval_expsum(const ExpSum& p, double t);
// int_a^b t^m e^{lambda t} dt.
cplx integral_power_exp(int m, cplx lambda, double a, double b);
// q(t) = p(t + c), re-expanded in powers of t.
ExpSum shift(const ExpSum& p, double c);
// Closed form of the integral of |p|^2 over [a, b]; quadrature fallback
// for nearly resonant pairs.
double integral_abs2(const ExpSum& p, double a, double b);
// Adaptive Gauss-Kronrod of |p|^2, relative tolerance 1e-10.
double integral_abs2_quad(const ExpSum& p, double a, double b);
// max |p|^2 over [a, b]: dense sampling plus golden-section refinement.
double sup_abs2(const ExpSum& p, double a, double b);

struct TuranDiscreteResult {
  int d = 0, m = 0;
  double lhs = 0, rhs = 0;
  double constant = 0;        // A(d)
  double constant_bound = 0;  // A(d) ((m+d)/d)^{2(d-1)}
  bool holds = false;
};

TuranDiscreteResult turan_discrete(const std::vector<cplx>& z, const std::vector<cplx>& c, int m,
                                   const TuranTable& table = TuranTable::shipped());

struct TuranIntegralResult {
  int d = 0;
  double a = 0, b = 0, R = 0;
  double lhs = 0, integral = 0, bound = 0;
  double constant = 0;  // integral-form constant
  bool holds = false;
  double sup_lhs = 0, tail_integral = 0, sup_bound = 0;
  double l2_lhs = 0, l2_bound = 0;
  double corollary_constant = 0;
  bool sup_holds = false, l2_holds = false;
};

TuranIntegralResult turan_integral(const ExpSum& p, double a, double b, double R,
                                   const TuranTable& table = TuranTable::shipped());

enum class IntervalMode { growth, decay };

struct ThreeIntervalResult {
  int d = 0, M = 0;
  double lhs = 0, rhs = 0, lambda = 0, constant = 0;
  bool holds = false;
};

ThreeIntervalResult three_interval(const ExpSum& p, double R, int l, IntervalMode mode,
                                   const TuranTable& table = TuranTable::shipped());

struct TuranEstimate {
  double value = 0;
  long skipped = 0;
};

TuranEstimate estimate_turan_constant(int d, int m_max, long trials, std::uint64_t seed);

// Random instances shared by the estimator and the sweeps.
struct DiscreteInstance {
  std::vector<cplx> z, c;
  int m = 1;
};
DiscreteInstance random_discrete_instance(std::mt19937_64& rng, int d, int m_max);
ExpSum random_pure_sum(std::mt19937_64& rng, int d, double re_lo, double re_hi);
ExpSum random_sum_with_powers(std::mt19937_64& rng, int total, double re_lo, double re_hi);

struct TuranSweepReport {
  long discrete_trials = 0, discrete_violations = 0;
  double discrete_worst = 0;  // max lhs / (constant_bound * rhs)
  long integral_trials = 0, integral_violations = 0;
  long corollary_violations = 0;  // sup-norm and L2 forms together
  double integral_worst = 0;
  long interval_trials = 0, growth_violations = 0, decay_violations = 0;
  double interval_worst = 0;  // max lhs / rhs over both modes
};

// Lemma sweeps with per-trial derived seeds:
//   discrete: d <= 4, m <= 10, |z_j| in [1, 3];
//   integral: d <= 3, Re zeta in [0, 2], 0 < a < b <= 5, R in [0.5, 2];
//   interval: M + d <= 5, |Re zeta| in [0.1, 2], R in [0.5, 2], l in 1..3,
//             each draw checked in growth mode and, mirrored, in decay mode.
TuranSweepReport turan_sweep(long discrete, long integral, long interval, std::uint64_t seed,
                             const TuranTable& table = TuranTable::shipped(), int jobs = 0);
TuranSweepReport turan_sweep_serial(long discrete, long integral, long interval, std::uint64_t seed,
                                    const TuranTable& table = TuranTable::shipped());

}  // namespace ale
