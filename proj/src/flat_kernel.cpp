#include "ale/flat_kernel.hpp"

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>

#include "ale/errors.hpp"
#include "ale/indicial.hpp"
#include "ale/polytensor.hpp"
#include "ale/seeds.hpp"

namespace ale {

std::string to_string(DivfreeMode m) {
  switch (m) {
    case DivfreeMode::degree0: return "degree0";
    case DivfreeMode::degree1: return "degree1";
    case DivfreeMode::log: return "log";
    case DivfreeMode::n3_degree1: return "n3_degree1";
  }
  return "?";
}

DivfreeMode divfree_mode_from_string(const std::string& s) {
  for (auto m : {DivfreeMode::degree0, DivfreeMode::degree1, DivfreeMode::log, DivfreeMode::n3_degree1})
    if (to_string(m) == s) return m;
  throw PreconditionError("unknown mode '" + s + "' (degree0|degree1|log|n3_degree1)");
}

std::vector<DivfreeMode> divfree_modes(int n, int k) {
  std::vector<DivfreeMode> out;
  out.push_back(n == 2 * (k + 1) ? DivfreeMode::log : DivfreeMode::degree0);
  out.push_back(DivfreeMode::degree1);
  if (n == 3) out.push_back(DivfreeMode::n3_degree1);
  return out;
}

std::size_t sym_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return static_cast<std::size_t>(i * n - i * (i - 1) / 2 + (j - i));
}

std::size_t sym3_index(int n, int i, int j, int l) { return sym_index(n, i, j) * n + l; }

namespace {

void check_mode(int n, int k, DivfreeMode mode) {
  if (k == 0) throw PreconditionError("k = 0 needs a trace-free hypothesis; not supported");
  require_theorem_range(n, k);
  if (mode == DivfreeMode::log && n != 2 * (k + 1)) throw PreconditionError("log mode needs n = 2(k+1)");
  if (mode == DivfreeMode::degree0 && n == 2 * (k + 1))
    throw PreconditionError("at n = 2(k+1) the degree-0 part is logarithmic; use mode log");
  if (mode == DivfreeMode::n3_degree1 && n != 3) throw PreconditionError("n3_degree1 mode needs n = 3");
}

bool is_linear(DivfreeMode m) { return m == DivfreeMode::degree1 || m == DivfreeMode::n3_degree1; }

std::size_t unknown_count(int n, DivfreeMode mode) {
  const std::size_t s = static_cast<std::size_t>(n * (n + 1) / 2);
  return is_linear(mode) ? s * n : s;
}

// Rows of the coefficient-matching system.
QMatrix assemble(int n, int k, DivfreeMode mode) {
  std::vector<QVector> rows;
  const std::size_t N = unknown_count(n, mode);
  if (!is_linear(mode)) {
    // div(f(|x|) c)_j = f'(r)/r * sum_i c_ij x_i, f'/r = w r^{w-2} or r^{-2}.
    const Q factor = mode == DivfreeMode::log ? Q(1) : Q(2 * (k + 1) - n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        QVector r(N);
        r[sym_index(n, i, j)] = factor;
        rows.push_back(std::move(r));
      }
  } else {
    // (n-2k) sum_{i,l} A_ijl x_i x_l = |x|^2 sum_i A_iji, matched monomial by monomial.
    const Q f = mode == DivfreeMode::n3_degree1 ? Q(1) : Q(n - 2 * k);
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < n; ++p)
        for (int q = p; q < n; ++q) {
          QVector r(N);
          if (p < q) {
            r[sym3_index(n, p, j, q)] += f;
            r[sym3_index(n, q, j, p)] += f;
          } else {
            r[sym3_index(n, p, j, p)] += f;
            for (int i = 0; i < n; ++i) r[sym3_index(n, i, j, i)] -= 1;
          }
          rows.push_back(std::move(r));
        }
  }
  QMatrix m(rows.size(), N);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < N; ++j) m(i, j) = rows[i][j];
  return m;
}

// Rows (or columns) of a sparse-patterned matrix in echelon form.
SparseEchelon<std::size_t> echelon(const QMatrix& m, bool by_columns, std::size_t* rank_out) {
  SparseEchelon<std::size_t> ech;
  std::size_t r = 0;
  const std::size_t outer = by_columns ? m.cols : m.rows, inner = by_columns ? m.rows : m.cols;
  for (std::size_t i = 0; i < outer; ++i) {
    SparseEchelon<std::size_t>::Row row;
    for (std::size_t j = 0; j < inner; ++j) {
      const Q& v = by_columns ? m(j, i) : m(i, j);
      if (v != 0) row[j] = v;
    }
    if (ech.add(std::move(row))) ++r;
  }
  if (rank_out) *rank_out = r;
  return ech;
}

bool identities_in_row_space(int n, const SparseEchelon<std::size_t>& ech) {
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int q = 0; q < n; ++q) {
        SparseEchelon<std::size_t>::Row r;
        if (l == q) {
          r[sym3_index(n, l, j, l)] = 1;
        } else {
          r[sym3_index(n, l, j, q)] += 1;
          r[sym3_index(n, q, j, l)] += 1;
          for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
        }
        if (!r.empty() && !ech.contains(r)) return false;
      }
  return true;
}

}  // namespace

DivfreeResult divfree_nullspace(int n, int k, DivfreeMode mode) {
  check_mode(n, k, mode);
  DivfreeResult res;
  res.mode = mode;
  res.n = n;
  res.k = k;
  QMatrix m = assemble(n, k, mode);
  res.unknowns = m.cols;
  res.equations = m.rows;
  auto ech = echelon(m, false, &res.rank);
  res.dimension = res.unknowns - res.rank;
  if (res.dimension > 0) res.basis = nullspace(m);
  if (is_linear(mode)) res.identities_implied = identities_in_row_space(n, ech);
  return res;
}

std::size_t divfree_nullspace_dimension_by_fields(int n, int k, DivfreeMode mode) {
  check_mode(n, k, mode);
  require(n <= kMaxDim, "dimension above " + std::to_string(kMaxDim) + " not supported by the field route");
  // Radial power of each candidate field. The log case uses r^1 c: only the
  // nonvanishing of d/dr of the radial factor enters div.
  Q gamma;
  switch (mode) {
    case DivfreeMode::degree0: gamma = Q(2 * (k + 1) - n); break;
    case DivfreeMode::log: gamma = Q(1); break;
    case DivfreeMode::degree1: gamma = Q(2 * (k + 1) - n - 2); break;
    case DivfreeMode::n3_degree1: gamma = Q(-1); break;
  }
  SparseEchelon<CoordKey> ech;
  std::size_t rank = 0, unknowns = 0;
  auto push = [&](int i, int j, const QPolyField& f) {
    QTensor h(n, 2);
    h.at({i, j}) += f;
    if (i != j) h.at({j, i}) += f;
    ++unknowns;
    if (ech.add(coordinates(div(h)))) ++rank;
  };
  const QPolyField rg = QPolyField::radial(n, gamma);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (!is_linear(mode)) {
        push(i, j, rg);
      } else {
        for (int l = 0; l < n; ++l) push(i, j, rg * QPolyField::coordinate(n, l));
      }
    }
  return unknowns - rank;
}

LieIsomorphismReport quadratic_lie_isomorphism(int n) {
  require(n >= 2, "quadratic_lie_isomorphism: n >= 2 expected");
  LieIsomorphismReport rep;
  rep.n = n;
  const std::size_t S = static_cast<std::size_t>(n * (n + 1) / 2);
  rep.rows = rep.cols = S * n;
  rep.dimension = rep.cols;
  rep.printed_dimension = static_cast<std::size_t>(n * n * (n - 1) / 2);
  // Columns: a_ilm at sym_index(l,m) * n + i. Rows: A_ijm at sym3_index(i,j,m).
  QMatrix M(rep.rows, rep.cols);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int m = l; m < n; ++m) {
        const std::size_t col = sym_index(n, l, m) * n + i;
        // d_j X_i = 2 sum_m a_ijm x_m; (L_X g0)_{ij} = d_i X_j + d_j X_i.
        auto deposit = [&](int j, int mm) {
          const std::size_t row = sym3_index(n, i, j, mm);
          M(row, col) += i == j ? 4 : 2;
        };
        deposit(l, m);
        if (l != m) deposit(m, l);
      }
  rep.matrix = M;
  echelon(M, true, &rep.rank);
  rep.killing_dimension = rep.cols - rep.rank;
  rep.invertible = rep.rows == rep.cols && rep.rank == rep.cols;
  return rep;
}

QuadraticField zero_quadratic_field(int n) {
  require(n >= 1 && n <= kMaxDim, "quadratic field dimension out of range");
  QuadraticField X;
  X.n = n;
  X.a.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  return X;
}

QuadraticField random_quadratic_field(int n, std::mt19937_64& rng) {
  QuadraticField X = zero_quadratic_field(n);
  std::normal_distribution<double> g;
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int m = l; m < n; ++m) X.set(i, l, m, g(rng));
  double s = 0;
  for (double v : X.a) s += v * v;
  s = std::sqrt(s);
  for (double& v : X.a) v /= s;
  return X;
}

namespace {

using State = std::vector<double>;

struct FlowSystem {
  const QuadraticField& X;
  // y = (x, J) with J row-major; x' = X(x), J' = DX(x) J.
  void operator()(const State& y, State& dy, double) const {
    const int n = X.n;
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      double xi = 0;
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
          const double a = X.at(i, l, m);
          xi += a * y[l] * y[m];
          D(i, l) += 2 * a * y[m];
        }
      dy[i] = xi;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int l = 0; l < n; ++l) s += D(i, l) * y[n + l * n + j];
        dy[n + i * n + j] = s;
      }
  }
};

double flow_defect(const QuadraticField& X, const Eigen::VectorXd& p) {
  namespace odeint = boost::numeric::odeint;
  const int n = X.n;
  State y(n + n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    y[i] = p(i);
    y[n + i * n + i] = 1.0;
  }
  FlowSystem sys{X};
  auto stepper = odeint::make_controlled(1e-14, 1e-12, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_adaptive(stepper, sys, y, 0.0, 1.0, 1e-3);
  for (double v : y)
    if (!std::isfinite(v)) throw NumericError("flow escaped before time 1");
  Eigen::MatrixXd J(n, n), DX = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) J(i, j) = y[n + i * n + j];
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m) DX(i, l) += 2 * X.at(i, l, m) * p(m);
  Eigen::MatrixXd E = J.transpose() * J - Eigen::MatrixXd::Identity(n, n) - (DX + DX.transpose());
  return E.norm();
}

}  // namespace

double flow_defect_at(const QuadraticField& X, const std::vector<double>& p) {
  require(static_cast<int>(p.size()) == X.n, "point dimension mismatch");
  return flow_defect(X, Eigen::Map<const Eigen::VectorXd>(p.data(), X.n));
}

FlowErrorReport quadratic_flow_error(const QuadraticField& X, const std::vector<double>& radii, int samples,
                                     std::uint64_t seed) {
  const int n = X.n;
  require(n >= 1 && X.a.size() == static_cast<std::size_t>(n) * n * n, "malformed quadratic field");
  require(samples >= 1, "samples >= 1 expected");
  require(radii.size() >= 2, "at least two radii expected");
  FlowErrorReport rep;
  double s = 0;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd A(n, n);
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m) A(l, m) = X.at(i, l, m);
    const double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues()(0);
    s += sigma * sigma;
  }
  rep.C_X = 2 * std::sqrt(s);
  double rmin = radii.front(), rmax = radii.front();
  for (double r : radii) {
    if (!(r > 0)) throw PreconditionError("radii must be positive");
    if (rep.C_X > 0 && r >= 1 / (2 * rep.C_X))
      throw PreconditionError("radius " + std::to_string(r) + " not below 1/(2 C_X) = " +
                              std::to_string(1 / (2 * rep.C_X)));
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  if (rmax < 10 * rmin * (1 - 1e-12)) throw PreconditionError("radii must span at least one decade");

  std::mt19937_64 rng(derive_seed(seed, 0));
  std::normal_distribution<double> g;
  std::vector<Eigen::VectorXd> dirs;
  for (int s2 = 0; s2 < samples; ++s2) {
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u(i) = g(rng);
    dirs.push_back(u.normalized());
  }
  rep.radii = radii;
  for (double r : radii) {
    double sup = 0;
    for (const auto& u : dirs) sup = std::max(sup, flow_defect(X, r * u));
    rep.errors.push_back(sup);
  }
  // Least squares on (log r, log e).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(rep.errors[i] > 0)) {
      cnt = 0;
      break;
    }
    const double lx = std::log(radii[i]), ly = std::log(rep.errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt < 2) {
    rep.slope = std::numeric_limits<double>::quiet_NaN();
  } else {
    rep.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  }
  return rep;
}

}  // namespace ale
