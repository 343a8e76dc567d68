// Divergence-free kernel sweep over the (n, k, mode) grid. Every grid point
// assembles both exact systems independently.

#include <omp.h>

#include <exception>

#include "ale/flat_kernel.hpp"
#include "ale/indicial.hpp"

namespace ale {

namespace {

struct Task {
  int n, k;
  DivfreeMode mode;
};

std::vector<Task> tasks_for(int n_max) {
  std::vector<Task> out;
  for (int n = 3; n <= n_max; ++n)
    for (int k = 1; 2 * k <= n; ++k) {
      if (!in_theorem_range(n, k)) continue;
      for (DivfreeMode m : divfree_modes(n, k)) out.push_back({n, k, m});
    }
  return out;
}

DivfreeCheck run(const Task& t) {
  DivfreeCheck c;
  c.result = divfree_nullspace(t.n, t.k, t.mode);
  c.field_dimension = divfree_nullspace_dimension_by_fields(t.n, t.k, t.mode);
  return c;
}

}  // namespace

std::vector<DivfreeCheck> divfree_sweep_serial(int n_max) {
  auto tasks = tasks_for(n_max);
  std::vector<DivfreeCheck> out;
  for (const auto& t : tasks) out.push_back(run(t));
  return out;
}

std::vector<DivfreeCheck> divfree_sweep(int n_max, int jobs) {
  auto tasks = tasks_for(n_max);
  std::vector<DivfreeCheck> out(tasks.size());
  const long count = static_cast<long>(tasks.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long i = 0; i < count; ++i) {
    try {
      out[i] = run(tasks[i]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace ale
