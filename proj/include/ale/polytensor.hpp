#pragma once

// Exact flat-space tensor calculus on R^n minus the origin. Components are
// finite sums c x^alpha r^gamma kept in a canonical form (x_n^2 is always
// rewritten as r^2 - x_1^2 - ... - x_{n-1}^2), so equal fields have equal
// representations and zero tests are exact.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ale/linalg.hpp"
#include "ale/rational.hpp"

namespace ale {

constexpr int kMaxDim = 8;

struct Mono {
  std::array<std::uint8_t, kMaxDim> alpha{};
  Q gamma;

  int degree() const {
    int s = 0;
    for (auto a : alpha) s += a;
    return s;
  }
};

bool operator<(const Mono& a, const Mono& b);
bool operator==(const Mono& a, const Mono& b);

template <class T>
class Poly {
 public:
  Poly() = default;
  explicit Poly(int n) : n_(n) {}

  static Poly constant(int n, const T& c);
  static Poly coordinate(int n, int i);        // x_i
  static Poly radial(int n, const Q& gamma);   // r^gamma

  int n() const { return n_; }
  const std::map<Mono, T>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // Adds c x^alpha r^gamma, reducing to canonical form.
  void add_term(const Mono& m, const T& c);
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const T& s);

  // Common homogeneity |alpha| + gamma of all terms, if there is one.
  std::optional<Q> homogeneity() const;
  double eval(const double* x) const;

 private:
  int n_ = 0;
  std::map<Mono, T> terms_;
};

template <class T> Poly<T> operator+(Poly<T> a, const Poly<T>& b) { return a += b; }
template <class T> Poly<T> operator-(Poly<T> a, const Poly<T>& b) { return a -= b; }
template <class T> Poly<T> operator*(const T& s, Poly<T> a) { return a *= s; }
template <class T> Poly<T> operator*(const Poly<T>& a, const Poly<T>& b);
template <class T> bool operator==(const Poly<T>& a, const Poly<T>& b) { return a.terms() == b.terms(); }

template <class T> Poly<T> partial(const Poly<T>& p, int i);
template <class T> Poly<T> laplacian(const Poly<T>& p);
template <class T> Poly<T> mul_x(const Poly<T>& p, int i);
template <class T> Poly<T> mul_r(const Poly<T>& p, const Q& gamma);

template <class T>
class Tensor {
 public:
  Tensor() = default;
  Tensor(int n, int rank);

  int n() const { return n_; }
  int rank() const { return rank_; }
  std::size_t size() const { return comps_.size(); }
  Poly<T>& operator[](std::size_t flat) { return comps_[flat]; }
  const Poly<T>& operator[](std::size_t flat) const { return comps_[flat]; }
  Poly<T>& at(std::initializer_list<int> idx);
  const Poly<T>& at(std::initializer_list<int> idx) const;
  std::vector<int> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::vector<int>& idx) const;

  bool is_zero() const;
  std::optional<Q> homogeneity() const;
  std::size_t term_count() const;

  Tensor& operator+=(const Tensor& o);
  Tensor& operator-=(const Tensor& o);
  Tensor& operator*=(const T& s);

 private:
  int n_ = 0, rank_ = 0;
  std::vector<Poly<T>> comps_;
};

template <class T> Tensor<T> operator+(Tensor<T> a, const Tensor<T>& b) { return a += b; }
template <class T> Tensor<T> operator-(Tensor<T> a, const Tensor<T>& b) { return a -= b; }
template <class T> Tensor<T> operator*(const T& s, Tensor<T> a) { return a *= s; }
template <class T> bool operator==(const Tensor<T>& a, const Tensor<T>& b);

using QPolyField = Poly<Q>;
using QTensor = Tensor<Q>;
using DTensor = Tensor<double>;

// Primitives.
template <class T> Tensor<T> scalar_field(const Poly<T>& f);
template <class T> Tensor<T> grad(const Tensor<T>& a);  // new index first
template <class T> Tensor<T> contract(const Tensor<T>& a, int i, int j);
template <class T> Tensor<T> outer(const Tensor<T>& a, const Tensor<T>& b);
template <class T> Tensor<T> transpose2(const Tensor<T>& a);
template <class T> Tensor<T> mul_poly(const Tensor<T>& a, const Poly<T>& f);
template <class T> Tensor<T> mul_r(const Tensor<T>& a, const Q& gamma);
template <class T> Tensor<T> laplacian(const Tensor<T>& a);  // componentwise

// Composites.
template <class T> Tensor<T> metric(int n);                // g0
template <class T> Tensor<T> radial_covector(int n);       // x_i / r = dr
template <class T> Tensor<T> position_covector(int n);     // x_i
template <class T> Tensor<T> div(const Tensor<T>& a);      // contract derivative with first slot
template <class T> Tensor<T> trace(const Tensor<T>& a);
template <class T> Tensor<T> hessian(const Tensor<T>& f);
template <class T> Tensor<T> i_radial(const Tensor<T>& a);  // x_i a_{i...} / r^2
template <class T> Tensor<T> sym(const Tensor<T>& a);
template <class T> Tensor<T> sym_product(const Tensor<T>& a, const Tensor<T>& b);  // a_i b_j + a_j b_i
template <class T> Tensor<T> lie(const Tensor<T>& xi);                             // L_xi g0
template <class T> Tensor<T> div_star(const Tensor<T>& xi);                        // -1/2 L_xi g0
template <class T> Tensor<T> delta_t(const Tensor<T>& a, const T& t);
template <class T> Tensor<T> box(const Tensor<T>& xi);
template <class T> Tensor<T> box_t(const Tensor<T>& xi, const T& t);
template <class T> Tensor<T> laplacian_power(const Tensor<T>& a, int m);
// Gauged operator c_{n,k}/(n-2) Delta^{k-1}(-1/2 Delta^2 h - t/2 Hess delta(i h) - t Delta delta*(i h)).
template <class T> Tensor<T> P_t_k(const Tensor<T>& h, const T& t, int k);
// Delta^{k-1} of the flat linearization of the Bach tensor.
template <class T> Tensor<T> lin_bach(const Tensor<T>& h, int k);

// 1 / prod_{i=2}^{k+1} (2i - n), or 1 when n = 2(k+1).
Q c_nk(int n, int k);

enum class Opcode {
  partial_i, laplacian, div, div_star, trace, hessian, i_radial, delta_t, lie, box, box_t, P_t_k, lin_bach,
  lap_power
};
std::string to_string(Opcode op);
Opcode opcode_from_string(const std::string& s);

struct OpParams {
  Q t = 0;
  int k = 1;
  int index = 0;  // partial_i
};

QTensor apply_operator(Opcode op, const QTensor& field, const OpParams& params);
DTensor apply_operator(Opcode op, const DTensor& field, const OpParams& params);
int op_order(Opcode op, const OpParams& params);   // number of derivatives = homogeneity drop
int op_out_rank(Opcode op, int in_rank);

DTensor to_double(const QTensor& a);
std::string to_json(const QTensor& a);
QTensor tensor_from_json(const std::string& text);

// Integral of x^alpha over the unit sphere S^{n-1}.
double sphere_moment(int n, const std::vector<int>& alpha);
// Same divided by the sphere area: prod (alpha_i - 1)!! / (n (n+2) ... (n+|alpha|-2)).
Q sphere_moment_normalized(int n, const std::vector<int>& alpha);
double sphere_area(int n);

// r^{-(n-1)} times the integral of <A, B> over the sphere of radius r, divided
// by the sphere area: a finite sum sum_e c_e r^e, keyed by e.
std::map<Q, Q> angular_inner_product(const QTensor& a, const QTensor& b);
// Same but the r-dependence must be absent; throws otherwise.
Q angular_inner_product_const(const QTensor& a, const QTensor& b);

// Sparse coordinates of a field in the canonical monomial basis.
using CoordKey = std::pair<std::size_t, Mono>;
std::map<CoordKey, Q> coordinates(const QTensor& a);

}  // namespace ale
