#include "ale/mode_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ale/errors.hpp"
#include "ale/indicial.hpp"

namespace ale {

namespace {

QMatrix sample_operator(Opcode op, const OpParams& params, const AngularBasis& in, const AngularBasis& out,
                        const Q& weight, const Q& m) {
  QMatrix s(out.size(), in.size());
  for (std::size_t c = 0; c < in.size(); ++c) {
    QTensor g = apply_operator(op, mul_r(in.elements[c], m), params);
    if (g.is_zero()) continue;
    g = mul_r(g, weight - m);
    auto coords = out.coordinates_of(g);
    if (!coords)
      throw PreconditionError("probe_euler: the image of " + in.tag + " under " + to_string(op) +
                              " leaves the output span; build the basis with closure_basis");
    for (std::size_t r = 0; r < out.size(); ++r) s(r, c) = (*coords)[r];
  }
  return s;
}

double binomial(int n, int k) {
  double b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

QMatrix EulerOperator::eval(const Q& z) const {
  QMatrix m(rows(), cols());
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c) m(r, c) = P[r][c].eval(z);
  return m;
}

Eigen::MatrixXcd EulerOperator::eval(cplx z, int derivative) const {
  Eigen::MatrixXcd m(rows(), cols());
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c) {
      QPoly p = P[r][c];
      for (int i = 0; i < derivative; ++i) p = p.derivative();
      m(r, c) = p.eval(z);
    }
  return m;
}

QPoly EulerOperator::det() const {
  require(rows() == cols(), "det: Euler operator is not square");
  const int D = static_cast<int>(rows()) * order;
  std::vector<Q> xs, ys;
  for (int i = 0; i <= D; ++i) {
    xs.emplace_back(i);
    ys.push_back(determinant(eval(Q(i))));
  }
  return interpolate(xs, ys);
}

EulerOperator probe_euler(Opcode op, const OpParams& params, const AngularBasis& in, const AngularBasis& out,
                          std::vector<Q> probes) {
  require(op_out_rank(op, in.rank) == out.rank, "probe_euler: output basis has the wrong rank");
  require(in.n == out.n, "probe_euler: dimension mismatch");
  EulerOperator E;
  E.op = op;
  E.params = params;
  E.in = in;
  E.out = out;
  E.order = op_order(op, params);
  E.weight = out.degree - in.degree + E.order;
  if (probes.empty())
    for (int i = 0; i <= E.order; ++i) probes.emplace_back(i);
  require(static_cast<int>(probes.size()) >= E.order + 1, "probe_euler: needs at least order+1 probes");
  for (std::size_t a = 0; a < probes.size(); ++a)
    for (std::size_t b = a + 1; b < probes.size(); ++b) require(probes[a] != probes[b], "probe_euler: repeated probe");
  std::vector<QMatrix> samples;
  for (const Q& m : probes) samples.push_back(sample_operator(op, params, in, out, E.weight, m));
  E.P.assign(out.size(), std::vector<QPoly>(in.size()));
  for (std::size_t r = 0; r < out.size(); ++r)
    for (std::size_t c = 0; c < in.size(); ++c) {
      std::vector<Q> ys;
      for (const auto& s : samples) ys.push_back(s(r, c));
      E.P[r][c] = interpolate(probes, ys);
      if (E.P[r][c].degree() > E.order) throw NumericError("probe_euler: interpolant exceeds the operator order");
    }
  Q hold = *std::max_element(probes.begin(), probes.end()) + Q(1, 2);
  QMatrix direct = sample_operator(op, params, in, out, E.weight, hold);
  QMatrix fitted = E.eval(hold);
  for (std::size_t i = 0; i < direct.a.size(); ++i)
    if (direct.a[i] != fitted.a[i]) throw NumericError("probe_euler: held-out probe disagrees with the interpolant");
  return E;
}

EulerOperator probe_euler(Opcode op, const OpParams& params, const AngularBasis& basis, std::vector<Q> probes) {
  return probe_euler(op, params, basis, basis, std::move(probes));
}

Eigen::MatrixXcd chain_system(const EulerOperator& E, cplx zeta, int mult) {
  const Eigen::Index R = E.rows(), C = E.cols();
  std::vector<Eigen::MatrixXcd> der;
  for (int i = 0; i < mult; ++i) der.push_back(E.eval(zeta, i));
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(mult * R, mult * C);
  for (int p = 0; p < mult; ++p)
    for (int i = 0; p + i < mult; ++i) M.block(p * R, (p + i) * C, R, C) = binomial(p + i, i) * der[i];
  return M;
}

IndicialSpectrum indicial_spectrum(const EulerOperator& E) {
  IndicialSpectrum s;
  s.tag = E.in.tag;
  s.m_ang = static_cast<int>(E.cols());
  s.order = E.order;
  s.det = E.det();
  require(!s.det.is_zero(), "indicial_spectrum: det P vanishes identically");
  for (const auto& w : E.in.weights) s.weights.push_back(to_double(w));
  for (const auto& r : roots_exact(s.det)) {
    SpectralRoot root;
    root.value = r.value;
    root.multiplicity = r.multiplicity;
    Eigen::MatrixXcd M = chain_system(E, r.value, r.multiplicity);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Eigen::Index N = M.cols(), mu = r.multiplicity;
    double scale = 0, fact = 1;
    for (int i = 0; i <= E.order; ++i) {
      if (i > 0) fact *= i;
      scale += E.eval(r.value, i).norm() / fact;
    }
    if (scale == 0) scale = 1;
    root.chains = svd.matrixV().rightCols(mu);
    root.residual = N - mu < sv.size() ? sv(N - mu) / scale : 0.0;
    root.gap = N - mu - 1 >= 0 && N - mu - 1 < sv.size() ? sv(N - mu - 1) / scale
                                                          : std::numeric_limits<double>::infinity();
    if (root.residual > 1e-7 || root.gap < 1e-7) s.low_confidence = true;
    s.total_multiplicity += r.multiplicity;
    s.roots.push_back(std::move(root));
  }
  for (std::size_t a = 0; a < s.roots.size(); ++a)
    for (std::size_t b = a + 1; b < s.roots.size(); ++b)
      if (std::abs(s.roots[a].value - s.roots[b].value) < 1e-6) s.low_confidence = true;
  s.beta = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < s.roots.size(); ++a) {
    const double re = s.roots[a].value.real();
    if (std::abs(re) < kZeroRealPart) {
      s.A_zero.push_back(a);
      continue;
    }
    (re > 0 ? s.A_plus : s.A_minus).push_back(a);
    s.beta = std::min(s.beta, std::abs(re));
  }
  return s;
}

ModeSolution random_mode_solution(const IndicialSpectrum& spec, std::mt19937_64& rng, bool spread_scales) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> expo(-2.0, 2.0);
  ModeSolution sol;
  for (const auto& root : spec.roots) {
    const int mu = root.multiplicity;
    Eigen::VectorXcd y(mu);
    double scale = spread_scales ? std::pow(10.0, expo(rng)) : 1.0;
    for (int i = 0; i < mu; ++i) {
      double re = g(rng), im = g(rng);
      y(i) = scale * cplx(re, im);
    }
    Eigen::VectorXcd v = root.chains * y;
    std::vector<Eigen::VectorXcd> blocks;
    for (int b = 0; b < mu; ++b) blocks.push_back(v.segment(b * spec.m_ang, spec.m_ang));
    sol.d.push_back(std::move(blocks));
  }
  return sol;
}

ModeProfile to_profile(const ModeSolution& sol, const IndicialSpectrum& spec) {
  ModeProfile p;
  p.weights = spec.weights;
  std::vector<std::vector<ExpTerm>> terms(spec.m_ang);
  for (std::size_t a = 0; a < sol.d.size(); ++a)
    for (std::size_t b = 0; b < sol.d[a].size(); ++b)
      for (int c = 0; c < spec.m_ang; ++c)
        if (sol.d[a][b](c) != cplx(0)) terms[c].push_back({sol.d[a][b](c), spec.roots[a].value, static_cast<int>(b)});
  for (auto& t : terms) p.q.emplace_back(std::move(t));
  return p;
}

Eigen::VectorXcd eval_mode(const ModeSolution& sol, const IndicialSpectrum& spec, double r) {
  require(r > 0, "eval_mode: r > 0");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(spec.m_ang);
  const double lr = std::log(r);
  for (std::size_t a = 0; a < sol.d.size(); ++a) {
    cplx base = std::exp(spec.roots[a].value * lr);
    for (std::size_t b = 0; b < sol.d[a].size(); ++b) out += sol.d[a][b] * (base * std::pow(lr, static_cast<int>(b)));
  }
  return out;
}

SolutionSplit solution_split(const ModeSolution& sol, const IndicialSpectrum& spec) {
  require(sol.d.size() == spec.roots.size(), "solution_split: solution and spectrum differ in root count");
  SolutionSplit s;
  s.beta = spec.beta;
  auto empty_like = [&](std::size_t a) {
    std::vector<Eigen::VectorXcd> z;
    for (std::size_t b = 0; b < sol.d[a].size(); ++b) z.push_back(Eigen::VectorXcd::Zero(spec.m_ang));
    return z;
  };
  for (std::size_t a = 0; a < sol.d.size(); ++a) {
    const double re = spec.roots[a].value.real();
    const bool zero = std::abs(re) < kZeroRealPart;
    s.plus.d.push_back(!zero && re > 0 ? sol.d[a] : empty_like(a));
    s.minus.d.push_back(!zero && re < 0 ? sol.d[a] : empty_like(a));
    s.zero.d.push_back(zero ? sol.d[a] : empty_like(a));
    if (zero)
      for (const auto& v : sol.d[a]) s.has_zero = s.has_zero || v.norm() > 0;
  }
  return s;
}

std::vector<AngularBasis> two_tensor_modes(int n, int j, const OpParams& params) {
  std::vector<AngularBasis> out;
  out.push_back(scalar_type_basis(n, j));
  if (j >= 1) {
    AngularBasis v = closure_basis(vector_type_seed(n, j), Opcode::P_t_k, params);
    v.tag = "vector j=" + std::to_string(j);
    out.push_back(std::move(v));
  }
  if (n >= 4 && j >= 2) {
    AngularBasis t = closure_basis(tensor_type_seed(n, j), Opcode::P_t_k, params);
    t.tag = "tensor j=" + std::to_string(j);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<IndicialSpectrum> annulus_mode_spectra(int n, int k, const Q& t, int j_max, bool scalar_power_modes) {
  require_theorem_range(n, k);
  require(j_max >= 0, "annulus_mode_spectra: j_max >= 0");
  OpParams p;
  p.k = k;
  p.t = t;
  std::vector<IndicialSpectrum> out;
  for (int j = 0; j <= j_max; ++j)
    for (const auto& b : two_tensor_modes(n, j, p)) {
      IndicialSpectrum s = indicial_spectrum(probe_euler(Opcode::P_t_k, p, b));
      if (s.A_zero.empty()) out.push_back(std::move(s));
    }
  if (scalar_power_modes)
    for (int s = 0; s <= j_max; ++s) {
      auto b = make_basis({scalar_field(angular_harmonic(n, s))}, "scalar power s=" + std::to_string(s));
      IndicialSpectrum sp = indicial_spectrum(probe_euler(Opcode::lap_power, p, b));
      if (sp.A_zero.empty()) out.push_back(std::move(sp));
    }
  return out;
}

}  // namespace ale
