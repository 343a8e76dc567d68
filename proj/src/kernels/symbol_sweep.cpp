// Random symbol checks. Trial i draws from its own derived stream, so the
// serial and parallel sweeps see identical inputs.

#include <omp.h>

#include <random>

#include "ale/seeds.hpp"
#include "ale/symbol.hpp"

namespace ale {

namespace {

SymbolSweepReport run_trial(std::uint64_t seed, long i) {
  std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
  std::normal_distribution<double> g;
  const int n = std::uniform_int_distribution<int>(3, 8)(rng);
  const int k_max = n == 3 ? 1 : n / 2 - 1;
  const int k = std::uniform_int_distribution<int>(1, k_max)(rng);
  SymbolInput in;
  in.n = n;
  in.k = k;
  in.xi.resize(n);
  Eigen::VectorXcd v(n);
  Eigen::MatrixXcd h(n, n);
  for (int a = 0; a < n; ++a) {
    in.xi(a) = g(rng);
    v(a) = {g(rng), g(rng)};
    for (int b = 0; b < n; ++b) h(a, b) = {g(rng), g(rng)};
  }
  h = (h + h.transpose()).eval();
  const double s = in.xi.squaredNorm();
  const double weight = std::pow(s, k + 1);

  SymbolSweepReport r;
  r.trials = 1;
  in.hhat = lie_symbol(in.xi, v);
  r.lie_residual = linearized_obstruction_symbol(in).norm() / (weight * in.hhat.norm());
  r.scalar_lie_residual = std::abs(linearized_scalar_symbol(in)) / (s * in.hhat.norm());

  in.hhat = transverse_traceless(in.xi, h);
  const Eigen::MatrixXcd expect = -(std::pow(-s, k + 1) / (2.0 * (n - 2))) * in.hhat;
  r.reduction_residual = (linearized_obstruction_symbol(in) - expect).norm() / (weight * in.hhat.norm());

  in.hhat = h;
  const Eigen::MatrixXcd base = linearized_obstruction_symbol(in);
  const double lambda = std::exp(std::uniform_real_distribution<double>(-1, 1)(rng));
  in.xi *= lambda;
  const Eigen::MatrixXcd scaled = linearized_obstruction_symbol(in);
  r.homogeneity_residual =
      (scaled - std::pow(lambda, 2 * (k + 1)) * base).norm() / (std::pow(lambda, 2 * (k + 1)) * base.norm());
  return r;
}

void merge(SymbolSweepReport& acc, const SymbolSweepReport& r) {
  acc.trials += r.trials;
  acc.lie_residual = std::max(acc.lie_residual, r.lie_residual);
  acc.scalar_lie_residual = std::max(acc.scalar_lie_residual, r.scalar_lie_residual);
  acc.reduction_residual = std::max(acc.reduction_residual, r.reduction_residual);
  acc.homogeneity_residual = std::max(acc.homogeneity_residual, r.homogeneity_residual);
}

}  // namespace

SymbolSweepReport symbol_sweep_serial(long trials, std::uint64_t seed) {
  SymbolSweepReport acc;
  for (long i = 0; i < trials; ++i) merge(acc, run_trial(seed, i));
  return acc;
}

SymbolSweepReport symbol_sweep(long trials, std::uint64_t seed, int jobs) {
  SymbolSweepReport acc;
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
  {
    SymbolSweepReport local;
#pragma omp for schedule(static)
    for (long i = 0; i < trials; ++i) merge(local, run_trial(seed, i));
#pragma omp critical
    merge(acc, local);
  }
  return acc;
}

}  // namespace ale
