// Degenerate-solution scan over the (t, j) grid. Each grid point builds its
// own closed bases and Euler systems, so tasks share nothing.

#include <omp.h>

#include <cmath>

#include "ale/errors.hpp"
#include "ale/indicial.hpp"
#include "ale/mode_ode.hpp"

namespace ale {

namespace {

struct Task {
  double t;
  int j;
};

// Unit vector of Eigen coordinates for the flat metric in the basis, if it lies there.
std::optional<Eigen::VectorXcd> metric_direction(const AngularBasis& b) {
  if (b.rank != 2 || b.degree != Q(0)) return std::nullopt;
  auto c = b.coordinates_of(metric<Q>(b.n));
  if (!c) return std::nullopt;
  Eigen::VectorXcd v(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) v(i) = to_double((*c)[i]);
  return v.normalized();
}

std::vector<DegenerateEntry> run_task(int n, int k, const Task& task) {
  OpParams p;
  p.k = k;
  p.t = q_from_decimal(task.t);
  std::vector<DegenerateEntry> out;
  for (const AngularBasis& basis : two_tensor_modes(n, task.j, p)) {
    DegenerateEntry e;
    e.t = task.t;
    e.mode = basis.tag;
    IndicialSpectrum spec = indicial_spectrum(probe_euler(Opcode::P_t_k, p, basis));
    if (spec.A_zero.empty()) {
      out.push_back(e);
      continue;
    }
    AngularBasis image = image_basis(basis, Opcode::delta_t, p, basis.degree - Q(1));
    std::optional<EulerOperator> D;
    if (image.size() > 0) D = probe_euler(Opcode::delta_t, p, basis, image);
    auto g0 = metric_direction(basis);
    for (std::size_t a : spec.A_zero) {
      const SpectralRoot& root = spec.roots[a];
      e.zero_roots += root.multiplicity;
      const Eigen::Index m = spec.m_ang;
      if (!D) {
        e.delta_free += root.multiplicity;
        continue;
      }
      Eigen::MatrixXcd C = chain_system(*D, root.value, root.multiplicity);
      Eigen::JacobiSVD<Eigen::MatrixXcd> cs(C);
      const double scale = std::max(cs.singularValues()(0), 1e-300);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(C * root.chains, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      for (Eigen::Index i = 0; i < root.multiplicity; ++i) {
        const double s = i < sv.size() ? sv(i) : 0.0;
        if (s / scale >= kIntersectionTolerance) continue;
        ++e.delta_free;
        if (!g0 || std::abs(root.value) > 1e-8) continue;
        Eigen::VectorXcd v = root.chains * svd.matrixV().col(i);
        const double tail = v.size() > m ? v.tail(v.size() - m).norm() : 0.0;
        Eigen::VectorXcd head = v.head(m);
        if (tail < 1e-9 && std::abs(g0->dot(head)) > (1 - 1e-9) * head.norm()) e.constant_witness = true;
      }
    }
    out.push_back(e);
  }
  return out;
}

std::vector<Task> tasks_for(int n, int k, const std::vector<double>& t_values, int j_max) {
  require_theorem_range(n, k);
  require(n <= kMaxDim, "degenerate_scan: n above the supported dimension");
  require(j_max >= 0, "degenerate_scan: needs j_max >= 0");
  std::vector<Task> tasks;
  for (double t : t_values)
    for (int j = 0; j <= j_max; ++j) tasks.push_back({t, j});
  return tasks;
}

DegenerateReport assemble(int n, int k, int j_max, const std::vector<std::vector<DegenerateEntry>>& parts) {
  DegenerateReport r;
  r.n = n;
  r.k = k;
  r.j_max = j_max;
  for (const auto& part : parts)
    for (const auto& e : part) {
      r.entries.push_back(e);
      if (e.t != 0) r.delta_free_nonzero_t += e.delta_free;
      if (e.t == 0 && e.constant_witness) r.constant_witness = true;
    }
  return r;
}

}  // namespace

DegenerateReport degenerate_scan_serial(int n, int k, const std::vector<double>& t_values, int j_max) {
  auto tasks = tasks_for(n, k, t_values, j_max);
  std::vector<std::vector<DegenerateEntry>> parts(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) parts[i] = run_task(n, k, tasks[i]);
  return assemble(n, k, j_max, parts);
}

DegenerateReport degenerate_scan(int n, int k, const std::vector<double>& t_values, int j_max, int jobs) {
  auto tasks = tasks_for(n, k, t_values, j_max);
  std::vector<std::vector<DegenerateEntry>> parts(tasks.size());
  const long count = static_cast<long>(tasks.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long i = 0; i < count; ++i) {
    try {
      parts[i] = run_task(n, k, tasks[i]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return assemble(n, k, j_max, parts);
}

}  // namespace ale
