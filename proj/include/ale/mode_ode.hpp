#pragma once

// Separated-variable Euler systems: an operator that commutes with scaling
// maps r^z e_c to r^{z-w} sum_c' P_{c'c}(z) f_c' on an invariant angular
// basis. P is recovered exactly by probing, and the roots of det P give the
// (log r)^b r^zeta solutions of each mode.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ale/basis.hpp"
#include "ale/poly1.hpp"

namespace ale {

struct EulerOperator {
  Opcode op = Opcode::laplacian;
  OpParams params;
  AngularBasis in, out;
  int order = 0;
  Q weight;                            // w
  std::vector<std::vector<QPoly>> P;   // out.size() x in.size()

  std::size_t rows() const { return out.size(); }
  std::size_t cols() const { return in.size(); }
  QMatrix eval(const Q& z) const;
  Eigen::MatrixXcd eval(cplx z, int derivative = 0) const;
  QPoly det() const;
};

// Exact P from order+1 probe exponents, plus a held-out check.
EulerOperator probe_euler(Opcode op, const OpParams& params, const AngularBasis& in, const AngularBasis& out,
                          std::vector<Q> probes = {});
EulerOperator probe_euler(Opcode op, const OpParams& params, const AngularBasis& basis, std::vector<Q> probes = {});

// Block matrix of the conditions sum_i C(p+i, i) P^{(i)}(zeta) v_{p+i} = 0,
// p = 0..mult-1, for sum_b (log r)^b r^zeta v_b to lie in the kernel.
Eigen::MatrixXcd chain_system(const EulerOperator& E, cplx zeta, int mult);

struct SpectralRoot {
  cplx value;
  int multiplicity = 1;
  Eigen::MatrixXcd chains;  // (mult * m) x mult, orthonormal columns
  double residual = 0;      // largest singular value kept, relative
  double gap = 0;           // next singular value, relative
};

struct IndicialSpectrum {
  std::string tag;
  int m_ang = 0, order = 0;
  QPoly det;
  std::vector<SpectralRoot> roots;
  std::vector<std::size_t> A_plus, A_minus, A_zero;
  double beta = 0;  // min |Re zeta| over A+ and A-, infinity when both are empty
  int total_multiplicity = 0;
  bool low_confidence = false;
  std::vector<double> weights;
};

constexpr double kZeroRealPart = 1e-8;

IndicialSpectrum indicial_spectrum(const EulerOperator& E);

// q_c(r) = sum_{a,b} d[a][b](c) (log r)^b r^{zeta_a}
struct ModeSolution {
  std::vector<std::vector<Eigen::VectorXcd>> d;
};

ModeSolution random_mode_solution(const IndicialSpectrum& spec, std::mt19937_64& rng, bool spread_scales = true);
ModeProfile to_profile(const ModeSolution& sol, const IndicialSpectrum& spec);
Eigen::VectorXcd eval_mode(const ModeSolution& sol, const IndicialSpectrum& spec, double r);

struct SolutionSplit {
  ModeSolution plus, minus, zero;
  double beta = 0;
  bool has_zero = false;
};

SolutionSplit solution_split(const ModeSolution& sol, const IndicialSpectrum& spec);

struct AnnulusCheck {
  double L = 0;
  long trials = 0;
  long growth_implication_failures = 0;
  long decay_implication_failures = 0;
  long dichotomy_failures = 0;
  long plus_failures = 0;
  long minus_failures = 0;
  long turan_failures = 0;
  bool pass() const {
    return growth_implication_failures + decay_implication_failures + dichotomy_failures + plus_failures +
               minus_failures + turan_failures ==
           0;
  }
};

struct ThreeAnnulusReport {
  double beta = 0, beta_prime = 0, a = 1;
  long trials = 0;
  std::uint64_t seed = 0;
  std::vector<AnnulusCheck> grid;
  std::optional<double> L0;
};

// L grid: 1.05 * 1.15^i up to L_max. The empirical L0 is the smallest grid
// value from which every larger grid value passes as well.
ThreeAnnulusReport three_annulus_verify(const std::vector<IndicialSpectrum>& modes, double beta_prime,
                                        double L_max, double a, long trials, std::uint64_t seed, int jobs = 0);
// Serial reference of the same sweep.
ThreeAnnulusReport three_annulus_verify_serial(const std::vector<IndicialSpectrum>& modes, double beta_prime,
                                               double L_max, double a, long trials, std::uint64_t seed);

// The orthogonal 2-tensor modes of degree j: scalar type, vector type (j >= 1)
// and tensor type (n >= 4, j >= 2), each closed under the operator.
std::vector<AngularBasis> two_tensor_modes(int n, int j, const OpParams& params);

// Spectra of P_t^(k) on every two-tensor mode with j <= j_max and no root on
// Re = 0, optionally followed by Delta^{k+1} on the scalar harmonics.
std::vector<IndicialSpectrum> annulus_mode_spectra(int n, int k, const Q& t, int j_max, bool scalar_power_modes);

struct DegenerateEntry {
  double t = 0;
  std::string mode;
  int zero_roots = 0;       // roots in A0, with multiplicity
  int delta_free = 0;       // dimension of the delta_t-free part
  bool constant_witness = false;
};

struct DegenerateReport {
  int n = 0, k = 0, j_max = 0;
  std::vector<DegenerateEntry> entries;
  int delta_free_nonzero_t = 0;
  bool constant_witness = false;
};

DegenerateReport degenerate_scan(int n, int k, const std::vector<double>& t_values, int j_max, int jobs = 0);
DegenerateReport degenerate_scan_serial(int n, int k, const std::vector<double>& t_values, int j_max);

// Relative threshold on sigma_min for the delta_t intersection.
constexpr double kIntersectionTolerance = 1e-9;

}  // namespace ale
