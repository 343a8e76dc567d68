#include "ale/basis.hpp"

#include <cmath>

#include "ale/errors.hpp"

namespace ale {

namespace {

// Re/Im pair for the complex polynomials behind the harmonic seeds.
struct CPoly {
  QPolyField re, im;
};

CPoly cmul(const CPoly& a, const CPoly& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

CPoly cvar(int n, int i_re, int i_im) { return {QPolyField::coordinate(n, i_re), QPolyField::coordinate(n, i_im)}; }

CPoly cpow(const CPoly& w, int j, int n) {
  CPoly acc{QPolyField::constant(n, Q(1)), QPolyField(n)};
  for (int i = 0; i < j; ++i) acc = cmul(acc, w);
  return acc;
}

CPoly cneg(const CPoly& a) {
  CPoly out = a;
  out.re *= Q(-1);
  out.im *= Q(-1);
  return out;
}

CPoly ctimes_i(const CPoly& a) { return {Q(-1) * a.im, a.re}; }

Q slice_product(const QTensor& a, const QTensor& b, const Q& degree) {
  auto prof = angular_inner_product(a, b);
  if (prof.empty()) return 0;
  if (prof.size() != 1 || prof.begin()->first != 2 * degree)
    throw PreconditionError("slice product: elements are not of the basis homogeneity");
  return prof.begin()->second;
}

std::vector<Q> default_probes(Opcode op, const OpParams& params) {
  std::vector<Q> m;
  for (int i = 0; i <= op_order(op, params); ++i) m.emplace_back(i);
  return m;
}

}  // namespace

QPolyField sectoral_harmonic(int n, int j) {
  require(j >= 0, "sectoral_harmonic: j >= 0");
  return cpow(cvar(n, 0, 1), j, n).re;
}

QPolyField angular_harmonic(int n, int j) { return mul_r(sectoral_harmonic(n, j), Q(-j)); }

QMatrix AngularBasis::gram() const {
  QMatrix g(size(), size());
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < size(); ++b) g(a, b) = slice_product(elements[a], elements[b], degree);
  return g;
}

std::optional<QVector> AngularBasis::coordinates_of(const QTensor& f) const {
  QVector out(size());
  if (f.is_zero()) return out;
  auto h = f.homogeneity();
  if (!h || *h != degree) return std::nullopt;
  QTensor res = f;
  for (std::size_t c = 0; c < size(); ++c) {
    out[c] = slice_product(f, elements[c], degree) / weights[c];
    QTensor e = elements[c];
    e *= out[c];
    res -= e;
  }
  if (!res.is_zero()) return std::nullopt;
  return out;
}

AngularBasis make_basis(const std::vector<QTensor>& elements, const std::string& tag) {
  AngularBasis b;
  b.tag = tag;
  bool first = true;
  for (const auto& e : elements) {
    if (e.is_zero()) continue;
    auto h = e.homogeneity();
    require(h.has_value(), "make_basis: element without pure homogeneity");
    if (first) {
      b.n = e.n();
      b.rank = e.rank();
      b.degree = *h;
      first = false;
    }
    require(e.n() == b.n && e.rank() == b.rank, "make_basis: mixed shapes");
    require(*h == b.degree, "make_basis: mixed homogeneities");
    QTensor v = e;
    for (std::size_t c = 0; c < b.size(); ++c) {
      QTensor u = b.elements[c];
      u *= slice_product(e, b.elements[c], b.degree) / b.weights[c];
      v -= u;
    }
    if (v.is_zero()) continue;
    Q w = slice_product(v, v, b.degree);
    if (sgn(w) == 0) continue;
    b.elements.push_back(std::move(v));
    b.weights.push_back(w);
  }
  require(!first, "make_basis: no nonzero elements");
  return b;
}

std::vector<QTensor> scalar_type_tensors(int n, int j) {
  require(n >= 3 && j >= 0, "scalar_type_tensors: n >= 3, j >= 0");
  const QPolyField phi = angular_harmonic(n, j);
  const QTensor f = scalar_field(phi);
  const QTensor x = position_covector<Q>(n);
  const QTensor xx = mul_r(outer(x, x), Q(-2));
  const QTensor pi = metric<Q>(n) - xx;
  const QTensor dphi = grad(f);
  QTensor t1 = mul_poly(xx, phi);
  QTensor t2 = sym_product(dphi, x);
  QTensor b = mul_r(hessian(f), Q(2)) + sym_product(x, dphi);
  QTensor tail = mul_poly(pi, phi);
  tail *= qfrac(j * (j + n - 2), n - 1);
  b += tail;
  QTensor t4 = mul_poly(pi, phi);
  return {t1, t2, b, t4};
}

AngularBasis scalar_type_basis(int n, int j) {
  return make_basis(scalar_type_tensors(n, j), "scalar j=" + std::to_string(j));
}

QTensor type_one_form(int n, int j) {
  require(n >= 3 && j >= 1, "type_one_form: n >= 3, j >= 1");
  QTensor w(n, 1);
  if (n == 3) {
    // x cross grad P
    QPolyField p = sectoral_harmonic(3, j);
    QPolyField p1 = partial(p, 0), p2 = partial(p, 1);
    QPolyField x1 = QPolyField::coordinate(3, 0), x2 = QPolyField::coordinate(3, 1), x3 = QPolyField::coordinate(3, 2);
    w[0] = Q(-1) * (x3 * p2);
    w[1] = x3 * p1;
    w[2] = x1 * p2 - x2 * p1;
  } else {
    QPolyField f = cpow(cvar(n, 2, 3), j - 1, n).re;
    w[1] = f * QPolyField::coordinate(n, 0);
    w[0] = Q(-1) * (f * QPolyField::coordinate(n, 1));
  }
  return mul_r(w, Q(-(j + 1)));
}

AngularBasis typeI_basis(int n, int j) {
  return make_basis({type_one_form(n, j)}, "typeI j=" + std::to_string(j));
}

AngularBasis typeII_basis(int n, int j) {
  require(n >= 3 && j >= 0, "typeII_basis: n >= 3, j >= 0");
  const QPolyField phi = angular_harmonic(n, j);
  QTensor el = mul_r(mul_poly(position_covector<Q>(n), phi), Q(-2));
  QTensor eu = grad(scalar_field(phi));
  return make_basis({el, eu}, "typeII j=" + std::to_string(j));
}

QTensor vector_type_seed(int n, int j) {
  QTensor rpsi = mul_r(type_one_form(n, j), Q(1));
  return sym_product(rpsi, radial_covector<Q>(n));
}

QTensor tensor_type_seed(int n, int j) {
  require(n >= 4 && j >= 2, "tensor_type_seed: n >= 4, j >= 2");
  const CPoly w1 = cvar(n, 0, 1), w2 = cvar(n, 2, 3);
  // a = w1 dw2 - w2 dw1: dx1 -> -w2, dx2 -> -i w2, dx3 -> w1, dx4 -> i w1
  std::vector<CPoly> a = {cneg(w2), cneg(ctimes_i(w2)), w1, ctimes_i(w1)};
  const CPoly pre = cpow(w1, j - 2, n);
  QTensor t(n, 2);
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) t.at({p, q}) = cmul(pre, cmul(a[p], a[q])).re;
  return mul_r(t, Q(-j));
}

QTensor strip_to_degree(const QTensor& f, const Q& d) {
  if (f.is_zero()) return f;
  auto h = f.homogeneity();
  if (!h) throw NumericError("operator image is not homogeneous");
  return mul_r(f, d - *h);
}

AngularBasis closure_basis(const QTensor& seed, Opcode op, const OpParams& params, int max_iter,
                           std::vector<Q> probes) {
  require(!seed.is_zero(), "closure_basis: zero seed");
  auto h = seed.homogeneity();
  require(h.has_value(), "closure_basis: seed must have pure homogeneity");
  require(op_out_rank(op, seed.rank()) == seed.rank(), "closure_basis: operator changes the rank");
  if (probes.empty()) probes = default_probes(op, params);
  SparseEchelon<CoordKey> ech;
  std::vector<QTensor> found;
  ech.add(coordinates(seed));
  found.push_back(seed);
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (const Q& m : probes) {
      QTensor g = strip_to_degree(apply_operator(op, mul_r(found[i], m), params), *h);
      if (g.is_zero()) continue;
      if (ech.add(coordinates(g))) {
        found.push_back(std::move(g));
        if (static_cast<int>(found.size()) > max_iter)
          throw NumericError("closure_basis: no closure after " + std::to_string(max_iter) + " elements");
      }
    }
  }
  return make_basis(found, "closure of " + to_string(op));
}

AngularBasis image_basis(const AngularBasis& in, Opcode op, const OpParams& params, const Q& out_degree,
                         std::vector<Q> probes) {
  if (probes.empty()) probes = default_probes(op, params);
  SparseEchelon<CoordKey> ech;
  std::vector<QTensor> found;
  for (const auto& e : in.elements)
    for (const Q& m : probes) {
      QTensor g = strip_to_degree(apply_operator(op, mul_r(e, m), params), out_degree);
      if (!g.is_zero() && ech.add(coordinates(g))) found.push_back(std::move(g));
    }
  return make_basis(found, "image of " + in.tag + " under " + to_string(op));
}

double triple_bar_norm_sq(const ModeProfile& h, double a, double b) {
  require(a > 0 && a < b, "triple_bar_norm: needs 0 < a < b");
  require(h.weights.size() == h.q.size(), "triple_bar_norm: weights and profiles differ in length");
  double acc = 0;
  for (std::size_t c = 0; c < h.q.size(); ++c)
    if (!h.q[c].empty()) acc += h.weights[c] * integral_abs2(h.q[c], std::log(a), std::log(b));
  return acc;
}

double triple_bar_norm(const ModeProfile& h, double a, double b) { return std::sqrt(triple_bar_norm_sq(h, a, b)); }

}  // namespace ale
