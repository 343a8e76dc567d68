#pragma once

// Finite-dimensional kernels on flat space: homogeneous divergence-free
// solutions at the two critical degrees, and quadratic vector fields whose
// Lie derivatives fill the linear symmetric 2-tensors.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ale/linalg.hpp"

namespace ale {

enum class DivfreeMode { degree0, degree1, log, n3_degree1 };
std::string to_string(DivfreeMode m);
DivfreeMode divfree_mode_from_string(const std::string& s);
// Modes that apply to (n, k): degree0 unless n = 2(k+1), log when n = 2(k+1),
// degree1 always, n3_degree1 when n = 3.
std::vector<DivfreeMode> divfree_modes(int n, int k);

struct DivfreeResult {
  DivfreeMode mode = DivfreeMode::degree0;
  int n = 0, k = 0;
  std::size_t unknowns = 0, equations = 0, rank = 0;
  std::size_t dimension = 0;
  std::vector<QVector> basis;
  // degree1 modes: A_pjp = 0 and A_ljm + A_mjl = 0 lie in the row space.
  bool identities_implied = true;
};

// Coefficient matching of delta(|x|^w * angular part) = 0, exact.
DivfreeResult divfree_nullspace(int n, int k, DivfreeMode mode);
// The same nullspace dimension computed by applying the tensor-calculus
// divergence to every candidate field.
std::size_t divfree_nullspace_dimension_by_fields(int n, int k, DivfreeMode mode);

struct DivfreeCheck {
  DivfreeResult result;
  std::size_t field_dimension = 0;  // from divfree_nullspace_dimension_by_fields
};
// Every (n, k) in range with n <= n_max, every applicable mode, both routes.
std::vector<DivfreeCheck> divfree_sweep(int n_max, int jobs = 0);
std::vector<DivfreeCheck> divfree_sweep_serial(int n_max);

// Unknown layout for symmetric-in-(i,j) arrays c_ij and A_ijl.
std::size_t sym_index(int n, int i, int j);
std::size_t sym3_index(int n, int i, int j, int l);  // (i,j) symmetric, l free

// X_i = sum a_ilm x_l x_m, a symmetric in (l, m).
struct QuadraticField {
  int n = 0;
  std::vector<double> a;  // a[(i*n + l)*n + m], stored symmetrically

  double& at(int i, int l, int m) { return a[(static_cast<std::size_t>(i) * n + l) * n + m]; }
  double at(int i, int l, int m) const { return a[(static_cast<std::size_t>(i) * n + l) * n + m]; }
  void set(int i, int l, int m, double v) { at(i, l, m) = at(i, m, l) = v; }
};

QuadraticField zero_quadratic_field(int n);
// Independent coefficients Gaussian, then scaled to unit Frobenius norm of a.
QuadraticField random_quadratic_field(int n, std::mt19937_64& rng);

struct LieIsomorphismReport {
  int n = 0;
  std::size_t rows = 0, cols = 0, rank = 0;
  std::size_t dimension = 0;          // n^2 (n+1) / 2, the assembled count
  std::size_t printed_dimension = 0;  // n^2 (n-1) / 2
  std::size_t killing_dimension = 0;  // quadratic Killing fields
  bool invertible = false;
  QMatrix matrix;
};

// Matrix of X -> L_X g0 from a_ilm to A_ijm with A_ijm = 2 (a_jim + a_ijm).
LieIsomorphismReport quadratic_lie_isomorphism(int n);

struct FlowErrorReport {
  double C_X = 0;                 // 2 max_{|u|=1} |X(u)| bound
  std::vector<double> radii;
  std::vector<double> errors;     // sup of |K_X^* g0 - L_X g0 - g0| per radius
  double slope = 0;               // log-log least squares; NaN when every error vanishes
};

// Frobenius norm of K_X^* g0 - L_X g0 - g0 at the point p.
double flow_defect_at(const QuadraticField& X, const std::vector<double>& p);

// Time-1 flow with its Jacobian through the variational equation, adaptive
// Dormand-Prince at tolerance 1e-12, on `samples` points per sphere.
FlowErrorReport quadratic_flow_error(const QuadraticField& X, const std::vector<double>& radii, int samples = 48,
                                     std::uint64_t seed = 1);

}  // namespace ale
