// Randomized sweeps over the three Turan-type lemmas. Trial i of each family
// draws from derive_seed(family seed, i), so scheduling never changes inputs.

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "ale/expsum.hpp"
#include "ale/seeds.hpp"

namespace ale {

namespace {

enum Family : std::uint64_t { kDiscrete = 1, kIntegral = 2, kInterval = 3 };

void discrete_trial(TuranSweepReport& r, std::uint64_t seed, long i, const TuranTable& table) {
  std::mt19937_64 rng(derive_seed(derive_seed(seed, kDiscrete), static_cast<std::uint64_t>(i)));
  const int d = std::uniform_int_distribution<int>(1, 4)(rng);
  auto inst = random_discrete_instance(rng, d, 10);
  auto res = turan_discrete(inst.z, inst.c, inst.m, table);
  ++r.discrete_trials;
  if (!res.holds) ++r.discrete_violations;
  if (res.rhs > 0) r.discrete_worst = std::max(r.discrete_worst, res.lhs / (res.constant_bound * res.rhs));
}

void integral_trial(TuranSweepReport& r, std::uint64_t seed, long i, const TuranTable& table) {
  std::mt19937_64 rng(derive_seed(derive_seed(seed, kIntegral), static_cast<std::uint64_t>(i)));
  const int d = std::uniform_int_distribution<int>(1, 3)(rng);
  ExpSum p = random_pure_sum(rng, d, 0.0, 2.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double b = 5.0 * (0.02 + 0.98 * u(rng));
  const double a = b * (0.01 + 0.98 * u(rng));
  const double R = 0.5 + 1.5 * u(rng);
  auto res = turan_integral(p, a, b, R, table);
  ++r.integral_trials;
  if (!res.holds) ++r.integral_violations;
  if (!res.sup_holds || !res.l2_holds) ++r.corollary_violations;
  if (res.bound > 0) r.integral_worst = std::max(r.integral_worst, res.lhs / res.bound);
}

void interval_trial(TuranSweepReport& r, std::uint64_t seed, long i, const TuranTable& table) {
  std::mt19937_64 rng(derive_seed(derive_seed(seed, kInterval), static_cast<std::uint64_t>(i)));
  const int total = std::uniform_int_distribution<int>(1, 5)(rng);
  ExpSum p = random_sum_with_powers(rng, total, 0.1, 2.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double R = 0.5 + 1.5 * u(rng);
  const int l = std::uniform_int_distribution<int>(1, 3)(rng);
  auto g = three_interval(p, R, l, IntervalMode::growth, table);
  std::vector<ExpTerm> mirrored = p.terms();
  for (auto& t : mirrored) t.exponent = -t.exponent;
  auto dcy = three_interval(ExpSum(std::move(mirrored)), R, l, IntervalMode::decay, table);
  ++r.interval_trials;
  if (!g.holds) ++r.growth_violations;
  if (!dcy.holds) ++r.decay_violations;
  if (g.rhs > 0) r.interval_worst = std::max(r.interval_worst, g.lhs / g.rhs);
  if (dcy.rhs > 0) r.interval_worst = std::max(r.interval_worst, dcy.lhs / dcy.rhs);
}

void merge(TuranSweepReport& a, const TuranSweepReport& b) {
  a.discrete_trials += b.discrete_trials;
  a.discrete_violations += b.discrete_violations;
  a.discrete_worst = std::max(a.discrete_worst, b.discrete_worst);
  a.integral_trials += b.integral_trials;
  a.integral_violations += b.integral_violations;
  a.corollary_violations += b.corollary_violations;
  a.integral_worst = std::max(a.integral_worst, b.integral_worst);
  a.interval_trials += b.interval_trials;
  a.growth_violations += b.growth_violations;
  a.decay_violations += b.decay_violations;
  a.interval_worst = std::max(a.interval_worst, b.interval_worst);
}

}  // namespace

TuranSweepReport turan_sweep_serial(long discrete, long integral, long interval, std::uint64_t seed,
                                    const TuranTable& table) {
  TuranSweepReport r;
  for (long i = 0; i < discrete; ++i) discrete_trial(r, seed, i, table);
  for (long i = 0; i < integral; ++i) integral_trial(r, seed, i, table);
  for (long i = 0; i < interval; ++i) interval_trial(r, seed, i, table);
  return r;
}

TuranSweepReport turan_sweep(long discrete, long integral, long interval, std::uint64_t seed,
                             const TuranTable& table, int jobs) {
  TuranSweepReport acc;
  const long total = discrete + integral + interval;
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
  {
    TuranSweepReport local;
#pragma omp for schedule(dynamic, 64)
    for (long i = 0; i < total; ++i) {
      if (i < discrete)
        discrete_trial(local, seed, i, table);
      else if (i < discrete + integral)
        integral_trial(local, seed, i - discrete, table);
      else
        interval_trial(local, seed, i - discrete - integral, table);
    }
#pragma omp critical
    merge(acc, local);
  }
  return acc;
}

}  // namespace ale
