// Serial reference vs OpenMP kernels on the sweep workloads.
// Usage: bench_sweeps [jobs] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "ale/expsum.hpp"
#include "ale/flat_kernel.hpp"
#include "ale/mode_ode.hpp"
#include "ale/symbol.hpp"

namespace {

double best_of(int repeats, const std::function<void()>& f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool agree) {
  std::printf("%-16s %10.3f %10.3f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
              agree ? "results agree" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  const int jobs = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  const std::uint64_t seed = 20240611;
  std::printf("jobs = %d, best of %d\n", jobs, repeats);
  std::printf("%-16s %10s %10s %9s\n", "workload", "serial s", "omp s", "speedup");

  {
    std::vector<ale::DivfreeCheck> a, b;
    const double s = best_of(repeats, [&] { a = ale::divfree_sweep_serial(8); });
    const double p = best_of(repeats, [&] { b = ale::divfree_sweep(8, jobs); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].result.dimension == b[i].result.dimension;
    row("divfree n<=8", s, p, same);
  }
  {
    ale::SymbolSweepReport a, b;
    const double s = best_of(repeats, [&] { a = ale::symbol_sweep_serial(20000, seed); });
    const double p = best_of(repeats, [&] { b = ale::symbol_sweep(20000, seed, jobs); });
    row("symbol 2e4", s, p, a.lie_residual == b.lie_residual && a.reduction_residual == b.reduction_residual);
  }
  {
    ale::TuranSweepReport a, b;
    const double s = best_of(repeats, [&] { a = ale::turan_sweep_serial(20000, 2000, 2000, seed); });
    const double p = best_of(repeats, [&] {
      b = ale::turan_sweep(20000, 2000, 2000, seed, ale::TuranTable::shipped(), jobs);
    });
    row("turan", s, p, a.discrete_worst == b.discrete_worst && a.interval_worst == b.interval_worst);
  }
  {
    const auto modes = ale::annulus_mode_spectra(4, 1, 0, 3, true);
    double beta = 1e300;
    for (const auto& m : modes) beta = std::min(beta, m.beta);
    ale::ThreeAnnulusReport a, b;
    const double s =
        best_of(repeats, [&] { a = ale::three_annulus_verify_serial(modes, 0.45 * beta, 30, 1, 200, seed); });
    const double p =
        best_of(repeats, [&] { b = ale::three_annulus_verify(modes, 0.45 * beta, 30, 1, 200, seed, jobs); });
    row("three-annulus", s, p, a.L0 == b.L0);
  }
  {
    const std::vector<double> ts{-0.1, -0.05, 0, 0.05, 0.1};
    ale::DegenerateReport a, b;
    const double s = best_of(repeats, [&] { a = ale::degenerate_scan_serial(4, 1, ts, 4); });
    const double p = best_of(repeats, [&] { b = ale::degenerate_scan(4, 1, ts, 4, jobs); });
    row("degenerate j<=4", s, p,
        a.entries.size() == b.entries.size() && a.delta_free_nonzero_t == b.delta_free_nonzero_t);
  }
  return 0;
}
