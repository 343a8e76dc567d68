#pragma once

// Fourier symbols of the flat linearized obstruction and scalar curvature.
// Conventions: grad -> i xi, Laplacian -> -|xi|^2, div h -> i h xi,
// div* w -> -(i/2)(xi w^T + w xi^T).

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace ale {

using cplx = std::complex<double>;

struct SymbolInput {
  int n = 0;
  int k = 1;
  Eigen::VectorXd xi;
  Eigen::MatrixXcd hhat;
};

// Requires n >= 3, k >= 1, matching sizes and a symmetric hhat.
void validate(const SymbolInput& in);

Eigen::MatrixXcd linearized_obstruction_symbol(const SymbolInput& in);
// |xi|^2 tr(hhat) - xi^T hhat xi.
cplx linearized_scalar_symbol(const SymbolInput& in);

// Symbol of L_v g0: i (xi v^T + v xi^T).
Eigen::MatrixXcd lie_symbol(const Eigen::VectorXd& xi, const Eigen::VectorXcd& v);
// Projection onto xi-transverse, trace-free matrices.
Eigen::MatrixXcd transverse_traceless(const Eigen::VectorXd& xi, const Eigen::MatrixXcd& h);

struct SymbolSweepReport {
  long trials = 0;
  // Relative residuals |out| / (|xi|^{2(k+1)} |hhat|), maximized over trials.
  double lie_residual = 0;
  double scalar_lie_residual = 0;
  double reduction_residual = 0;
  double homogeneity_residual = 0;
};

// Random n in {3..8}, k in the admissible range, Gaussian xi, v and hhat.
SymbolSweepReport symbol_sweep(long trials, std::uint64_t seed, int jobs = 0);
SymbolSweepReport symbol_sweep_serial(long trials, std::uint64_t seed);

}  // namespace ale
