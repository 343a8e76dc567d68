#include "ale/polytensor.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

#include "ale/errors.hpp"
#include "json.hpp"

namespace ale {

namespace {

inline bool is_zero_coeff(const Q& c) { return sgn(c) == 0; }
inline bool is_zero_coeff(double c) { return c == 0.0; }

template <class T> T from_q(const Q& q);
template <> Q from_q<Q>(const Q& q) { return q; }
template <> double from_q<double>(const Q& q) { return q.get_d(); }

template <class T> T frac(long a, long b) { return from_q<T>(qfrac(a, b)); }

std::size_t ipow(int n, int r) {
  std::size_t p = 1;
  for (int i = 0; i < r; ++i) p *= static_cast<std::size_t>(n);
  return p;
}

}  // namespace

bool operator<(const Mono& a, const Mono& b) {
  int c = std::memcmp(a.alpha.data(), b.alpha.data(), kMaxDim);
  if (c != 0) return c < 0;
  return cmp(a.gamma, b.gamma) < 0;
}

bool operator==(const Mono& a, const Mono& b) { return a.alpha == b.alpha && a.gamma == b.gamma; }

// ---------------------------------------------------------------- Poly

template <class T>
Poly<T> Poly<T>::constant(int n, const T& c) {
  Poly p(n);
  p.add_term(Mono{}, c);
  return p;
}

template <class T>
Poly<T> Poly<T>::coordinate(int n, int i) {
  Poly p(n);
  Mono m;
  m.alpha[i] = 1;
  p.add_term(m, T(1));
  return p;
}

template <class T>
Poly<T> Poly<T>::radial(int n, const Q& gamma) {
  Poly p(n);
  Mono m;
  m.gamma = gamma;
  p.add_term(m, T(1));
  return p;
}

template <class T>
void Poly<T>::add_term(const Mono& m, const T& c) {
  if (is_zero_coeff(c)) return;
  const int last = n_ - 1;
  if (m.alpha[last] >= 2) {
    Mono base = m;
    base.alpha[last] -= 2;
    Mono up = base;
    up.gamma += 2;
    add_term(up, c);
    for (int i = 0; i < last; ++i) {
      Mono t = base;
      t.alpha[i] += 2;
      add_term(t, T(-c));
    }
    return;
  }
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (is_zero_coeff(it->second)) terms_.erase(it);
  }
}

template <class T>
Poly<T>& Poly<T>::operator+=(const Poly& o) {
  if (n_ == 0) n_ = o.n_;
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

template <class T>
Poly<T>& Poly<T>::operator-=(const Poly& o) {
  if (n_ == 0) n_ = o.n_;
  for (const auto& [m, c] : o.terms_) add_term(m, T(-c));
  return *this;
}

template <class T>
Poly<T>& Poly<T>::operator*=(const T& s) {
  if (is_zero_coeff(s)) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

template <class T>
std::optional<Q> Poly<T>::homogeneity() const {
  std::optional<Q> h;
  for (const auto& [m, c] : terms_) {
    Q d = m.gamma + m.degree();
    if (!h) h = d;
    else if (*h != d) return std::nullopt;
  }
  return h;
}

template <class T>
double Poly<T>::eval(const double* x) const {
  double r2 = 0;
  for (int i = 0; i < n_; ++i) r2 += x[i] * x[i];
  const double r = std::sqrt(r2);
  double acc = 0;
  for (const auto& [m, c] : terms_) {
    double v = from_q<double>(Q(0)) + 1.0;
    for (int i = 0; i < n_; ++i)
      for (int e = 0; e < m.alpha[i]; ++e) v *= x[i];
    if (sgn(m.gamma) != 0) v *= std::pow(r, m.gamma.get_d());
    if constexpr (std::is_same_v<T, Q>) acc += c.get_d() * v;
    else acc += c * v;
  }
  return acc;
}

template <class T>
Poly<T> operator*(const Poly<T>& a, const Poly<T>& b) {
  Poly<T> out(a.n() ? a.n() : b.n());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      Mono m;
      for (int i = 0; i < kMaxDim; ++i) m.alpha[i] = ma.alpha[i] + mb.alpha[i];
      m.gamma = ma.gamma + mb.gamma;
      out.add_term(m, T(ca * cb));
    }
  return out;
}

template <class T>
Poly<T> partial(const Poly<T>& p, int i) {
  require(i >= 0 && i < p.n(), "partial: index out of range");
  Poly<T> out(p.n());
  for (const auto& [m, c] : p.terms()) {
    if (m.alpha[i] > 0) {
      Mono d = m;
      d.alpha[i] -= 1;
      out.add_term(d, T(c * from_q<T>(Q(m.alpha[i]))));
    }
    if (sgn(m.gamma) != 0) {
      Mono d = m;
      d.alpha[i] += 1;
      d.gamma -= 2;
      out.add_term(d, T(c * from_q<T>(m.gamma)));
    }
  }
  return out;
}

template <class T>
Poly<T> laplacian(const Poly<T>& p) {
  // Delta(x^a r^g) = sum_i a_i(a_i-1) x^{a-2e_i} r^g + g(2|a| + g + n - 2) x^a r^{g-2}
  const int n = p.n();
  Poly<T> out(n);
  for (const auto& [m, c] : p.terms()) {
    for (int i = 0; i < n; ++i)
      if (m.alpha[i] >= 2) {
        Mono d = m;
        d.alpha[i] -= 2;
        out.add_term(d, T(c * from_q<T>(Q(m.alpha[i] * (m.alpha[i] - 1)))));
      }
    if (sgn(m.gamma) != 0) {
      Mono d = m;
      d.gamma -= 2;
      Q f = m.gamma * (2 * m.degree() + m.gamma + n - 2);
      out.add_term(d, T(c * from_q<T>(f)));
    }
  }
  return out;
}

template <class T>
Poly<T> mul_x(const Poly<T>& p, int i) {
  Poly<T> out(p.n());
  for (const auto& [m, c] : p.terms()) {
    Mono d = m;
    d.alpha[i] += 1;
    out.add_term(d, c);
  }
  return out;
}

template <class T>
Poly<T> mul_r(const Poly<T>& p, const Q& gamma) {
  Poly<T> out(p.n());
  for (const auto& [m, c] : p.terms()) {
    Mono d = m;
    d.gamma += gamma;
    out.add_term(d, c);
  }
  return out;
}

// ---------------------------------------------------------------- Tensor

template <class T>
Tensor<T>::Tensor(int n, int rank) : n_(n), rank_(rank), comps_(ipow(n, rank), Poly<T>(n)) {
  require(n >= 2 && n <= kMaxDim, "tensor dimension must lie in 2.." + std::to_string(kMaxDim));
  require(rank >= 0, "negative tensor rank");
}

template <class T>
std::vector<int> Tensor<T>::unflatten(std::size_t flat) const {
  std::vector<int> idx(rank_);
  for (int k = rank_ - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return idx;
}

template <class T>
std::size_t Tensor<T>::flatten(const std::vector<int>& idx) const {
  std::size_t f = 0;
  for (int v : idx) f = f * n_ + v;
  return f;
}

template <class T>
Poly<T>& Tensor<T>::at(std::initializer_list<int> idx) {
  return comps_[flatten(std::vector<int>(idx))];
}

template <class T>
const Poly<T>& Tensor<T>::at(std::initializer_list<int> idx) const {
  return comps_[flatten(std::vector<int>(idx))];
}

template <class T>
bool Tensor<T>::is_zero() const {
  for (const auto& c : comps_)
    if (!c.is_zero()) return false;
  return true;
}

template <class T>
std::optional<Q> Tensor<T>::homogeneity() const {
  std::optional<Q> h;
  for (const auto& c : comps_) {
    if (c.is_zero()) continue;
    auto hc = c.homogeneity();
    if (!hc) return std::nullopt;
    if (!h) h = hc;
    else if (*h != *hc) return std::nullopt;
  }
  return h;
}

template <class T>
std::size_t Tensor<T>::term_count() const {
  std::size_t s = 0;
  for (const auto& c : comps_) s += c.size();
  return s;
}

template <class T>
Tensor<T>& Tensor<T>::operator+=(const Tensor& o) {
  require(n_ == o.n_ && rank_ == o.rank_, "tensor sum: shape mismatch");
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
  return *this;
}

template <class T>
Tensor<T>& Tensor<T>::operator-=(const Tensor& o) {
  require(n_ == o.n_ && rank_ == o.rank_, "tensor difference: shape mismatch");
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= o.comps_[i];
  return *this;
}

template <class T>
Tensor<T>& Tensor<T>::operator*=(const T& s) {
  for (auto& c : comps_) c *= s;
  return *this;
}

template <class T>
bool operator==(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.n() != b.n() || a.rank() != b.rank()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

template <class T>
Tensor<T> scalar_field(const Poly<T>& f) {
  Tensor<T> t(f.n(), 0);
  t[0] = f;
  return t;
}

template <class T>
Tensor<T> grad(const Tensor<T>& a) {
  Tensor<T> out(a.n(), a.rank() + 1);
  const std::size_t block = a.size();
  for (int i = 0; i < a.n(); ++i)
    for (std::size_t f = 0; f < block; ++f) out[i * block + f] = partial(a[f], i);
  return out;
}

template <class T>
Tensor<T> contract(const Tensor<T>& a, int i, int j) {
  require(i != j && i >= 0 && j >= 0 && i < a.rank() && j < a.rank(), "contract: bad slots");
  if (i > j) std::swap(i, j);
  Tensor<T> out(a.n(), a.rank() - 2);
  for (std::size_t f = 0; f < out.size(); ++f) {
    std::vector<int> rest = out.unflatten(f);
    std::vector<int> full(a.rank());
    Poly<T> acc(a.n());
    for (int k = 0; k < a.n(); ++k) {
      int p = 0;
      for (int s = 0; s < a.rank(); ++s) full[s] = (s == i || s == j) ? k : rest[p++];
      acc += a[a.flatten(full)];
    }
    out[f] = std::move(acc);
  }
  return out;
}

template <class T>
Tensor<T> outer(const Tensor<T>& a, const Tensor<T>& b) {
  require(a.n() == b.n(), "outer: dimension mismatch");
  Tensor<T> out(a.n(), a.rank() + b.rank());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

template <class T>
Tensor<T> transpose2(const Tensor<T>& a) {
  require(a.rank() == 2, "transpose2: rank 2 expected");
  Tensor<T> out(a.n(), 2);
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j) out.at({i, j}) = a.at({j, i});
  return out;
}

template <class T>
Tensor<T> mul_poly(const Tensor<T>& a, const Poly<T>& f) {
  Tensor<T> out(a.n(), a.rank());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * f;
  return out;
}

template <class T>
Tensor<T> mul_r(const Tensor<T>& a, const Q& gamma) {
  Tensor<T> out(a.n(), a.rank());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = mul_r(a[i], gamma);
  return out;
}

template <class T>
Tensor<T> laplacian(const Tensor<T>& a) {
  Tensor<T> out(a.n(), a.rank());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = laplacian(a[i]);
  return out;
}

template <class T>
Tensor<T> metric(int n) {
  Tensor<T> g(n, 2);
  for (int i = 0; i < n; ++i) g.at({i, i}) = Poly<T>::constant(n, T(1));
  return g;
}

template <class T>
Tensor<T> position_covector(int n) {
  Tensor<T> x(n, 1);
  for (int i = 0; i < n; ++i) x[i] = Poly<T>::coordinate(n, i);
  return x;
}

template <class T>
Tensor<T> radial_covector(int n) {
  return mul_r(position_covector<T>(n), Q(-1));
}

template <class T>
Tensor<T> div(const Tensor<T>& a) {
  require(a.rank() >= 1, "div: rank >= 1 expected");
  return contract(grad(a), 0, 1);
}

template <class T>
Tensor<T> trace(const Tensor<T>& a) {
  require(a.rank() >= 2, "trace: rank >= 2 expected");
  return contract(a, 0, 1);
}

template <class T>
Tensor<T> hessian(const Tensor<T>& f) {
  return grad(grad(f));
}

template <class T>
Tensor<T> i_radial(const Tensor<T>& a) {
  require(a.rank() >= 1, "i_radial: rank >= 1 expected");
  Tensor<T> out(a.n(), a.rank() - 1);
  const std::size_t block = out.size();
  for (std::size_t f = 0; f < block; ++f) {
    Poly<T> acc(a.n());
    for (int i = 0; i < a.n(); ++i) acc += mul_x(a[i * block + f], i);
    out[f] = mul_r(acc, Q(-2));
  }
  return out;
}

template <class T>
Tensor<T> sym(const Tensor<T>& a) {
  Tensor<T> s = a + transpose2(a);
  s *= frac<T>(1, 2);
  return s;
}

template <class T>
Tensor<T> sym_product(const Tensor<T>& a, const Tensor<T>& b) {
  require(a.rank() == 1 && b.rank() == 1, "sym_product: 1-forms expected");
  Tensor<T> ab = outer(a, b);
  return ab + transpose2(ab);
}

template <class T>
Tensor<T> lie(const Tensor<T>& xi) {
  require(xi.rank() == 1, "lie: 1-form expected");
  Tensor<T> g = grad(xi);
  return g + transpose2(g);
}

template <class T>
Tensor<T> div_star(const Tensor<T>& xi) {
  Tensor<T> l = lie(xi);
  l *= frac<T>(-1, 2);
  return l;
}

template <class T>
Tensor<T> delta_t(const Tensor<T>& a, const T& t) {
  Tensor<T> ir = i_radial(a);
  ir *= T(-t);
  return div(a) + ir;
}

template <class T>
Tensor<T> box(const Tensor<T>& xi) {
  return div(lie(xi));
}

template <class T>
Tensor<T> box_t(const Tensor<T>& xi, const T& t) {
  return delta_t(lie(xi), t);
}

template <class T>
Tensor<T> laplacian_power(const Tensor<T>& a, int m) {
  require(m >= 0, "laplacian_power: negative exponent");
  Tensor<T> out = a;
  for (int i = 0; i < m; ++i) out = laplacian(out);
  return out;
}

Q c_nk(int n, int k) {
  if (n == 2 * (k + 1)) return Q(1);
  Q prod = 1;
  for (int i = 2; i <= k + 1; ++i) prod *= Q(2 * i - n);
  require(sgn(prod) != 0, "c_nk: vanishing normalization");
  return Q(1) / prod;
}

template <class T>
Tensor<T> P_t_k(const Tensor<T>& h, const T& t, int k) {
  require(h.rank() == 2, "P_t_k: symmetric 2-tensor expected");
  require(k >= 1, "P_t_k: k >= 1");
  const int n = h.n();
  Tensor<T> s = laplacian_power(h, 2);
  s *= frac<T>(-1, 2);
  if (!is_zero_coeff(t)) {
    Tensor<T> w = i_radial(h);
    Tensor<T> hd = hessian(div(w));
    hd *= T(-t / from_q<T>(Q(2)));
    Tensor<T> ld = laplacian(div_star(w));
    ld *= T(-t);
    s += hd;
    s += ld;
  }
  s = laplacian_power(s, k - 1);
  s *= from_q<T>(c_nk(n, k) / Q(n - 2));
  return s;
}

template <class T>
Tensor<T> lin_bach(const Tensor<T>& h, int k) {
  require(h.rank() == 2, "lin_bach: symmetric 2-tensor expected");
  require(k >= 1, "lin_bach: k >= 1");
  const long n = h.n();
  Tensor<T> tr = trace(h);
  Tensor<T> dd = div(div(h));
  Tensor<T> out = laplacian_power(h, 2);
  out *= frac<T>(-1, 2 * (n - 2));
  Tensor<T> t2 = hessian(laplacian(tr));
  t2 *= frac<T>(-1, 2 * (n - 1) * (n - 2));
  Tensor<T> t3 = hessian(dd);
  t3 *= frac<T>(-1, 2 * (n - 1));
  Tensor<T> t4 = laplacian(div_star(div(h)));
  t4 *= frac<T>(-1, n - 2);
  Tensor<T> sc = laplacian_power(tr, 2) - laplacian(dd);
  Tensor<T> t5 = mul_poly(metric<T>(h.n()), sc[0]);
  t5 *= frac<T>(1, 2 * (n - 1) * (n - 2));
  out += t2;
  out += t3;
  out += t4;
  out += t5;
  return laplacian_power(out, k - 1);
}

// ---------------------------------------------------------------- dispatch

std::string to_string(Opcode op) {
  switch (op) {
    case Opcode::partial_i: return "partial_i";
    case Opcode::laplacian: return "laplacian";
    case Opcode::div: return "div";
    case Opcode::div_star: return "div_star";
    case Opcode::trace: return "trace";
    case Opcode::hessian: return "hessian";
    case Opcode::i_radial: return "i_radial";
    case Opcode::delta_t: return "delta_t";
    case Opcode::lie: return "lie";
    case Opcode::box: return "box";
    case Opcode::box_t: return "box_t";
    case Opcode::P_t_k: return "P_t_k";
    case Opcode::lin_bach: return "lin_bach";
    case Opcode::lap_power: return "lap_power";
  }
  return "?";
}

Opcode opcode_from_string(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(Opcode::lap_power); ++i)
    if (to_string(static_cast<Opcode>(i)) == s) return static_cast<Opcode>(i);
  throw PreconditionError("unknown operator '" + s + "'");
}

namespace {

template <class T>
Tensor<T> apply_impl(Opcode op, const Tensor<T>& f, const OpParams& p) {
  const T t = from_q<T>(p.t);
  switch (op) {
    case Opcode::partial_i: {
      Tensor<T> out(f.n(), f.rank());
      for (std::size_t i = 0; i < f.size(); ++i) out[i] = partial(f[i], p.index);
      return out;
    }
    case Opcode::laplacian: return laplacian(f);
    case Opcode::div: return div(f);
    case Opcode::div_star: return div_star(f);
    case Opcode::trace: return trace(f);
    case Opcode::hessian: return hessian(f);
    case Opcode::i_radial: return i_radial(f);
    case Opcode::delta_t: return delta_t(f, t);
    case Opcode::lie: return lie(f);
    case Opcode::box: return box(f);
    case Opcode::box_t: return box_t(f, t);
    case Opcode::P_t_k: return P_t_k(f, t, p.k);
    case Opcode::lin_bach: return lin_bach(f, p.k);
    case Opcode::lap_power: return laplacian_power(f, p.k + 1);
  }
  throw PreconditionError("unhandled operator");
}

}  // namespace

QTensor apply_operator(Opcode op, const QTensor& field, const OpParams& params) {
  return apply_impl(op, field, params);
}

DTensor apply_operator(Opcode op, const DTensor& field, const OpParams& params) {
  return apply_impl(op, field, params);
}

int op_order(Opcode op, const OpParams& p) {
  switch (op) {
    case Opcode::trace: return 0;
    case Opcode::partial_i:
    case Opcode::div:
    case Opcode::div_star:
    case Opcode::i_radial:
    case Opcode::delta_t:
    case Opcode::lie: return 1;
    case Opcode::laplacian:
    case Opcode::hessian:
    case Opcode::box:
    case Opcode::box_t: return 2;
    case Opcode::P_t_k:
    case Opcode::lin_bach:
    case Opcode::lap_power: return 2 * (p.k + 1);
  }
  return 0;
}

int op_out_rank(Opcode op, int r) {
  switch (op) {
    case Opcode::partial_i:
    case Opcode::laplacian:
    case Opcode::box:
    case Opcode::box_t:
    case Opcode::P_t_k:
    case Opcode::lin_bach:
    case Opcode::lap_power: return r;
    case Opcode::div:
    case Opcode::i_radial:
    case Opcode::delta_t: return r - 1;
    case Opcode::div_star:
    case Opcode::lie: return 2;
    case Opcode::trace: return r - 2;
    case Opcode::hessian: return r + 2;
  }
  return r;
}

DTensor to_double(const QTensor& a) {
  DTensor out(a.n(), a.rank());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (const auto& [m, c] : a[i].terms()) out[i].add_term(m, c.get_d());
  return out;
}

std::string to_json(const QTensor& a) {
  nlohmann::ordered_json j;
  j["n"] = a.n();
  j["rank"] = a.rank();
  auto comps = nlohmann::ordered_json::array();
  for (std::size_t f = 0; f < a.size(); ++f) {
    if (a[f].is_zero()) continue;
    nlohmann::ordered_json c;
    c["index"] = a.unflatten(f);
    auto terms = nlohmann::ordered_json::array();
    for (const auto& [m, coeff] : a[f].terms()) {
      std::vector<int> alpha(m.alpha.begin(), m.alpha.begin() + a.n());
      terms.push_back({{"coeff", coeff.get_str()}, {"alpha", alpha}, {"gamma", m.gamma.get_str()}});
    }
    c["terms"] = terms;
    comps.push_back(c);
  }
  j["components"] = comps;
  return j.dump();
}

QTensor tensor_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  QTensor out(j.at("n").get<int>(), j.at("rank").get<int>());
  for (const auto& c : j.at("components")) {
    auto idx = c.at("index").get<std::vector<int>>();
    require(static_cast<int>(idx.size()) == out.rank(), "tensor json: index length != rank");
    auto& comp = out[out.flatten(idx)];
    for (const auto& t : c.at("terms")) {
      Mono m;
      auto alpha = t.at("alpha").get<std::vector<int>>();
      require(static_cast<int>(alpha.size()) == out.n(), "tensor json: alpha length != n");
      for (int i = 0; i < out.n(); ++i) {
        require(alpha[i] >= 0, "tensor json: negative exponent");
        m.alpha[i] = static_cast<std::uint8_t>(alpha[i]);
      }
      auto g = t.value("gamma", nlohmann::json("0"));
      m.gamma = g.is_string() ? q_parse(g.get<std::string>()) : q_from_decimal(g.get<double>());
      auto cj = t.at("coeff");
      Q coeff = cj.is_string() ? q_parse(cj.get<std::string>()) : q_from_decimal(cj.get<double>());
      comp.add_term(m, coeff);
    }
  }
  return out;
}

// ---------------------------------------------------------------- sphere integrals

Q sphere_moment_normalized(int n, const std::vector<int>& alpha) {
  require(n >= 2, "sphere_moment: n >= 2");
  Q num = 1;
  int total = 0;
  for (int a : alpha) {
    if (a % 2 != 0) return 0;
    for (int k = a - 1; k > 0; k -= 2) num *= k;
    total += a;
  }
  Q den = 1;
  for (int m = 0; m < total / 2; ++m) den *= n + 2 * m;
  return num / den;
}

double sphere_area(int n) { return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0); }

double sphere_moment(int n, const std::vector<int>& alpha) {
  return sphere_moment_normalized(n, alpha).get_d() * sphere_area(n);
}

std::map<Q, Q> angular_inner_product(const QTensor& a, const QTensor& b) {
  require(a.n() == b.n() && a.rank() == b.rank(), "angular_inner_product: shape mismatch");
  const int n = a.n();
  std::map<Q, Q> out;
  std::vector<int> alpha(n);
  for (std::size_t f = 0; f < a.size(); ++f)
    for (const auto& [ma, ca] : a[f].terms())
      for (const auto& [mb, cb] : b[f].terms()) {
        bool odd = false;
        for (int i = 0; i < n; ++i) {
          alpha[i] = ma.alpha[i] + mb.alpha[i];
          odd = odd || (alpha[i] % 2 != 0);
        }
        if (odd) continue;
        Q e = ma.gamma + mb.gamma + ma.degree() + mb.degree();
        out[e] += ca * cb * sphere_moment_normalized(n, alpha);
      }
  for (auto it = out.begin(); it != out.end();)
    it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
  return out;
}

Q angular_inner_product_const(const QTensor& a, const QTensor& b) {
  auto prof = angular_inner_product(a, b);
  if (prof.empty()) return 0;
  if (prof.size() != 1 || sgn(prof.begin()->first) != 0)
    throw PreconditionError("angular_inner_product_const: inputs are not radially parallel");
  return prof.begin()->second;
}

std::map<CoordKey, Q> coordinates(const QTensor& a) {
  std::map<CoordKey, Q> out;
  for (std::size_t f = 0; f < a.size(); ++f)
    for (const auto& [m, c] : a[f].terms()) out.emplace(CoordKey{f, m}, c);
  return out;
}

// ---------------------------------------------------------------- instantiations

#define ALE_INSTANTIATE(T)                                                        \
  template class Poly<T>;                                                         \
  template class Tensor<T>;                                                       \
  template Poly<T> operator*(const Poly<T>&, const Poly<T>&);                     \
  template Poly<T> partial(const Poly<T>&, int);                                  \
  template Poly<T> laplacian(const Poly<T>&);                                     \
  template Poly<T> mul_x(const Poly<T>&, int);                                    \
  template Poly<T> mul_r(const Poly<T>&, const Q&);                               \
  template bool operator==(const Tensor<T>&, const Tensor<T>&);                   \
  template Tensor<T> scalar_field(const Poly<T>&);                                \
  template Tensor<T> grad(const Tensor<T>&);                                      \
  template Tensor<T> contract(const Tensor<T>&, int, int);                        \
  template Tensor<T> outer(const Tensor<T>&, const Tensor<T>&);                   \
  template Tensor<T> transpose2(const Tensor<T>&);                                \
  template Tensor<T> mul_poly(const Tensor<T>&, const Poly<T>&);                  \
  template Tensor<T> mul_r(const Tensor<T>&, const Q&);                           \
  template Tensor<T> laplacian(const Tensor<T>&);                                 \
  template Tensor<T> metric<T>(int);                                              \
  template Tensor<T> radial_covector<T>(int);                                     \
  template Tensor<T> position_covector<T>(int);                                   \
  template Tensor<T> div(const Tensor<T>&);                                       \
  template Tensor<T> trace(const Tensor<T>&);                                     \
  template Tensor<T> hessian(const Tensor<T>&);                                   \
  template Tensor<T> i_radial(const Tensor<T>&);                                  \
  template Tensor<T> sym(const Tensor<T>&);                                       \
  template Tensor<T> sym_product(const Tensor<T>&, const Tensor<T>&);             \
  template Tensor<T> lie(const Tensor<T>&);                                       \
  template Tensor<T> div_star(const Tensor<T>&);                                  \
  template Tensor<T> delta_t(const Tensor<T>&, const T&);                         \
  template Tensor<T> box(const Tensor<T>&);                                       \
  template Tensor<T> box_t(const Tensor<T>&, const T&);                           \
  template Tensor<T> laplacian_power(const Tensor<T>&, int);                      \
  template Tensor<T> P_t_k(const Tensor<T>&, const T&, int);                      \
  template Tensor<T> lin_bach(const Tensor<T>&, int);

ALE_INSTANTIATE(Q)
ALE_INSTANTIATE(double)

}  // namespace ale
