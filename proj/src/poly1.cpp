#include "ale/poly1.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "ale/errors.hpp"

namespace ale {

QPoly QPoly::monomial(const Q& a, int deg) {
  std::vector<Q> c(deg + 1, 0);
  c[deg] = a;
  return QPoly(std::move(c));
}

void QPoly::trim() {
  while (!c.empty() && sgn(c.back()) == 0) c.pop_back();
}

Q QPoly::eval(const Q& z) const {
  Q acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

cplx QPoly::eval(cplx z) const {
  cplx acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + to_double(*it);
  return acc;
}

QPoly QPoly::derivative() const {
  if (c.size() <= 1) return {};
  std::vector<Q> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<long>(i);
  return QPoly(std::move(d));
}

QPoly QPoly::monic() const {
  if (is_zero()) return *this;
  QPoly m = *this;
  Q l = lead();
  for (auto& x : m.c) x /= l;
  return m;
}

QPoly operator+(const QPoly& a, const QPoly& b) {
  std::vector<Q> c(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) c[i] += b.c[i];
  return QPoly(std::move(c));
}

QPoly operator-(const QPoly& a, const QPoly& b) { return a + Q(-1) * b; }

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Q> c(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) c[i + j] += a.c[i] * b.c[j];
  return QPoly(std::move(c));
}

QPoly operator*(const Q& s, const QPoly& a) {
  std::vector<Q> c = a.c;
  for (auto& x : c) x *= s;
  return QPoly(std::move(c));
}

bool operator==(const QPoly& a, const QPoly& b) { return a.c == b.c; }

std::string to_string(const QPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int i = p.degree(); i >= 0; --i) {
    const Q& a = p.c[i];
    if (a == 0) continue;
    Q mag = abs(a);
    if (out.empty())
      out += a < 0 ? "-" : "";
    else
      out += a < 0 ? " - " : " + ";
    if (mag != 1 || i == 0) out += mag.get_str() + (i > 0 ? " " : "");
    if (i >= 1) out += "z";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
  require(!b.is_zero(), "polynomial division by zero");
  if (a.degree() < b.degree()) return {QPoly{}, a};
  std::vector<Q> q(a.degree() - b.degree() + 1, 0);
  std::vector<Q> r = a.c;
  for (int i = a.degree(); i >= b.degree(); --i) {
    Q f = r[i] / b.lead();
    q[i - b.degree()] = f;
    if (sgn(f) == 0) continue;
    for (int j = 0; j <= b.degree(); ++j) r[i - b.degree() + j] -= f * b.c[j];
  }
  return {QPoly(std::move(q)), QPoly(std::move(r))};
}

QPoly gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::vector<std::pair<QPoly, int>> squarefree_factors(const QPoly& p) {
  std::vector<std::pair<QPoly, int>> out;
  if (p.degree() < 1) return out;
  QPoly f = p.monic();
  QPoly d = f.derivative();
  QPoly a = gcd(f, d);
  QPoly b = divmod(f, a).first;
  QPoly c = divmod(d, a).first;
  QPoly e = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    QPoly g = gcd(b, e);
    if (g.degree() > 0) out.emplace_back(g, i);
    b = divmod(b, g).first;
    c = divmod(e, g).first;
    e = c - b.derivative();
    ++i;
  }
  return out;
}

QPoly interpolate(const std::vector<Q>& xs, const std::vector<Q>& ys) {
  require(xs.size() == ys.size() && !xs.empty(), "interpolate: bad sample sets");
  QPoly acc;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    QPoly basis = QPoly::constant(1);
    Q denom = 1;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      require(xs[i] != xs[j], "interpolate: repeated abscissa");
      basis = basis * QPoly({-xs[j], Q(1)});
      denom *= xs[i] - xs[j];
    }
    acc = acc + Q(ys[i] / denom) * basis;
  }
  return acc;
}

namespace {

std::vector<cplx> companion_eigenvalues(const std::vector<cplx>& c) {
  const int deg = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) C(i, deg - 1) = -c[i] / c[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  if (es.info() != Eigen::Success) throw NumericError("companion eigenvalue solver failed");
  std::vector<cplx> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(i);
  return roots;
}

void sort_roots(std::vector<cplx>& r) {
  std::sort(r.begin(), r.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

}  // namespace

std::vector<cplx> squarefree_roots(const QPoly& p) {
  const int deg = p.degree();
  if (deg < 1) return {};
  if (deg == 1) return {cplx(to_double(-p.c[0] / p.c[1]), 0.0)};
  // Monic rescale keeps the companion matrix well scaled.
  QPoly m = p.monic();
  std::vector<cplx> c(deg + 1);
  for (int i = 0; i <= deg; ++i) c[i] = to_double(m.c[i]);
  auto roots = companion_eigenvalues(c);
  QPoly dp = m.derivative();
  for (auto& z : roots) {
    // Exact rational roots are common here; snap them first.
    double re = std::round(z.real() * 2.0) / 2.0;
    if (std::abs(z.imag()) < 1e-6 && std::abs(z.real() - re) < 1e-6 && sgn(m.eval(q_from_decimal(re))) == 0) {
      z = cplx(re, 0.0);
      continue;
    }
    for (int it = 0; it < 50; ++it) {
      cplx f = m.eval(z), g = dp.eval(z);
      if (std::abs(g) == 0.0) break;
      cplx step = f / g;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    double scale = 0;
    for (int i = 0; i <= deg; ++i) scale += std::abs(c[i]) * std::pow(std::abs(z), i);
    if (std::abs(m.eval(z)) > 1e-8 * std::max(1.0, scale))
      throw NumericError("root polishing stalled; residual " + std::to_string(std::abs(m.eval(z))));
    if (std::abs(z.imag()) < 1e-13 * std::max(1.0, std::abs(z.real()))) z = cplx(z.real(), 0.0);
  }
  sort_roots(roots);
  return roots;
}

std::vector<RootWithMultiplicity> roots_exact(const QPoly& p) {
  std::vector<RootWithMultiplicity> out;
  for (const auto& [f, mult] : squarefree_factors(p))
    for (auto z : squarefree_roots(f)) out.push_back({z, mult});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

std::vector<RootWithMultiplicity> roots_clustered(const std::vector<cplx>& coeffs, double radius) {
  std::vector<cplx> c = coeffs;
  while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
  if (c.size() < 2) return {};
  auto roots = companion_eigenvalues(c);
  sort_roots(roots);
  std::vector<RootWithMultiplicity> out;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    cplx sum = roots[i];
    int m = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (!used[j] && std::abs(roots[j] - roots[i]) < radius) {
        used[j] = true;
        sum += roots[j];
        ++m;
      }
    out.push_back({sum / static_cast<double>(m), m});
  }
  return out;
}

}  // namespace ale
