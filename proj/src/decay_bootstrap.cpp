#include "ale/decay_bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <tuple>

#include "ale/errors.hpp"
#include "ale/flat_kernel.hpp"
#include "ale/indicial.hpp"

namespace ale {

std::string to_string(Regime r) { return r == Regime::infinity ? "infinity" : "origin"; }

Regime regime_from_string(const std::string& s) {
  if (s == "infinity") return Regime::infinity;
  if (s == "origin") return Regime::origin;
  throw PreconditionError("unknown regime '" + s + "' (infinity|origin)");
}

Q SchematicTerm::order(const Q& h_order, Regime regime) const {
  Q s = 0;
  for (int a : alphas) s += regime == Regime::infinity ? Q(h_order + a) : Q(h_order - a);
  return s;
}

std::vector<SchematicTerm> obstruction_remainder_terms(int k, int j_max) {
  require(k >= 1, "remainder terms: k >= 1 expected");
  const int top = 2 * (k + 1);
  std::vector<SchematicTerm> out;
  out.push_back({1, {0, top}});
  for (int j = 2; j <= j_max; ++j) {
    // Weak compositions of top into j parts, in nonincreasing order only:
    // the order of a term does not see the arrangement of its factors.
    std::vector<int> a(j, 0);
    std::function<void(int, int, int)> rec = [&](int pos, int left, int cap) {
      if (pos == j - 1) {
        if (left <= cap) {
          a[pos] = left;
          out.push_back({j, a});
        }
        return;
      }
      for (int v = std::min(left, cap); v >= 0; --v) {
        a[pos] = v;
        rec(pos + 1, left - v, v);
      }
    };
    rec(0, top, top);
  }
  return out;
}

std::vector<SchematicTerm> scalar_remainder_terms() {
  return {{1, {0, 2}}, {2, {0, 2}}, {2, {1, 1}}, {3, {1, 1, 0}}};
}

Q remainder_order(int k, int n, const Q& h_order, Regime regime) {
  require(k >= 1 && n >= 3, "remainder_order: n >= 3, k >= 1 expected");
  if (h_order <= 0) throw PreconditionError("remainder_order: h_order > 0 expected");
  // The quadratic terms dominate: every higher product adds h_order > 0.
  const auto terms = obstruction_remainder_terms(k, 2);
  Q best = terms.front().order(h_order, regime);
  for (const auto& t : terms) best = std::min(best, t.order(h_order, regime));
  return best;
}

double remainder_order(int k, int n, double h_order, Regime regime) {
  if (!(h_order > 0)) throw PreconditionError("remainder_order: h_order > 0 expected");
  return to_double(remainder_order(k, n, q_from_decimal(h_order), regime));
}

std::vector<Q> DecayState::path() const {
  std::vector<Q> p{initial};
  for (const auto& s : history)
    if (s.order != p.back()) p.push_back(s.order);
  return p;
}

namespace {

struct Barrier {
  int degree;
  std::string mechanism;
  std::function<bool()> verify;
};

// Results are pure functions of their arguments; cache across sweeps.
bool divfree_trivial(int n, int k, DivfreeMode mode) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, bool> cache;
  const auto key = std::make_tuple(n, k, static_cast<int>(mode));
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const DivfreeResult r = divfree_nullspace(n, k, mode);
  const bool ok = r.dimension == 0 && r.identities_implied;
  std::lock_guard<std::mutex> lock(mu);
  cache[key] = ok;
  return ok;
}

bool lie_invertible(int n) {
  static std::mutex mu;
  static std::map<int, bool> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  const bool ok = quadratic_lie_isomorphism(n).invertible;
  std::lock_guard<std::mutex> lock(mu);
  cache[n] = ok;
  return ok;
}

// Doubling with barrier kills. The source of Lap^{k+1} h has order
// remainder_order(o); inverting the Laplacian power gives candidate order
// c = remainder_order(o) -/+ 2(k+1) = 2o. A candidate that lands on an
// exceptional degree only yields that degree minus tau.
void iterate(DecayState& st, std::vector<Barrier> barriers) {
  std::sort(barriers.begin(), barriers.end(), [](const Barrier& a, const Barrier& b) { return a.degree < b.degree; });
  for (const auto& b : barriers) st.barriers.push_back(b.degree);
  const Q shift = st.regime == Regime::infinity ? Q(-2 * (st.k + 1)) : Q(2 * (st.k + 1));
  std::vector<bool> killed(barriers.size(), false);
  int step = static_cast<int>(st.history.size());
  while (!st.terminal()) {
    const Q o = st.order;
    const Q c = remainder_order(st.k, st.n, o, st.regime) + shift;
    for (std::size_t i = 0; i < barriers.size(); ++i) {
      const Q d(barriers[i].degree);
      if (killed[i] || d < o || d >= c) continue;
      killed[i] = true;
      st.history.push_back({++step, d, false, barriers[i].mechanism, barriers[i].verify()});
    }
    if (c >= st.target) {
      std::string m = "expansion reaches the target degree; remainder source order " +
                      remainder_order(st.k, st.n, o, st.regime).get_str();
      if (c == st.target) m += " (candidate equals the target; exact order under tau -> 0)";
      st.order = st.target;
      st.open = false;
      st.history.push_back({++step, st.order, false, m, std::nullopt});
      break;
    }
    bool exceptional = false;
    for (const auto& b : barriers) exceptional = exceptional || Q(b.degree) == c;
    st.order = c;
    st.open = exceptional;
    st.history.push_back({++step, c, exceptional,
                          "quadratic remainder, source order " + remainder_order(st.k, st.n, o, st.regime).get_str() +
                              (exceptional ? "; exceptional candidate, order minus tau" : ""),
                          std::nullopt});
  }
}

}  // namespace

DecayState bootstrap_infinity(int n, int k, const Q& beta0) {
  require_theorem_range(n, k);
  if (beta0 <= 0) throw PreconditionError("bootstrap_infinity: beta0 > 0 expected");
  DecayState st;
  st.regime = Regime::infinity;
  st.n = n;
  st.k = k;
  st.initial = beta0;
  st.target = Q(n - 2 * k);
  if (beta0 >= st.target) {
    st.order = st.target;
    return st;
  }
  st.order = beta0;
  if (n == 2 * (k + 1))
    st.history.push_back({1, beta0, false, "log-mode kill: divergence-free log |x| c vanishes",
                          divfree_trivial(n, k, DivfreeMode::log)});
  std::vector<Barrier> barriers;
  const int d0 = n - 2 * k - 2, d1 = n - 2 * k - 1;
  if (d0 >= 1)
    barriers.push_back({d0, "degree-0 divergence-free kill: |x|^{2(k+1)-n} c vanishes",
                        [=] { return divfree_trivial(n, k, DivfreeMode::degree0); }});
  if (d1 >= 1)
    barriers.push_back({d1, "degree-1 divergence-free kill: |x|^{2(k+1)-n} u(x/|x|^2) vanishes",
                        [=] { return divfree_trivial(n, k, DivfreeMode::degree1); }});
  iterate(st, barriers);
  return st;
}

DecayState bootstrap_infinity(int n, int k, double beta0) {
  if (!(beta0 > 0)) throw PreconditionError("bootstrap_infinity: beta0 > 0 expected");
  return bootstrap_infinity(n, k, q_from_decimal(beta0));
}

DecayState bootstrap_origin(int n, int k, const Q& sigma0) {
  require_theorem_range(n, k);
  if (sigma0 <= 0) throw PreconditionError("bootstrap_origin: sigma0 > 0 expected");
  DecayState st;
  st.regime = Regime::origin;
  st.n = n;
  st.k = k;
  st.initial = sigma0;
  st.target = Q(2);
  if (sigma0 >= st.target) {
    st.order = st.target;
    return st;
  }
  st.order = sigma0;
  iterate(st, {{1, "Lie subtraction: G_1 = L_X g0 for a quadratic X, pull back by K_{-X}, error O(r^2)",
                [=] { return lie_invertible(n); }}});
  return st;
}

DecayState bootstrap_origin(int n, int k, double sigma0) {
  if (!(sigma0 > 0)) throw PreconditionError("bootstrap_origin: sigma0 > 0 expected");
  return bootstrap_origin(n, k, q_from_decimal(sigma0));
}

RegularityLadder regularity_ladder(int n, int k, std::optional<double> epsilon) {
  require_theorem_range(n, k);
  RegularityLadder r;
  r.n = n;
  r.k = k;
  const double bound = 1.0 / (2 * k - 1);
  const double eps = epsilon.value_or(bound / 2);
  if (!(eps > 0 && eps < bound))
    throw PreconditionError("epsilon must lie in (0, 1/(2k-1)) = (0, " + std::to_string(bound) + ")");
  if (k == 1) {
    r.p_infinite = true;
    r.gap = 1;
  } else {
    r.epsilon = eps;
    r.p = (1 - eps) * n / (2.0 * (k - 1));
    r.gap = 2 * k - 1 - n / r.p;
  }
  r.gap_ok = r.gap > 0 && r.gap <= 1;
  const std::string p = r.p_infinite ? "inf" : std::to_string(r.p);
  const std::string a = "0 < alpha < " + std::to_string(r.gap);
  r.steps = {
      {"Ric in W^{2k," + p + "}", "Lap^k Ric = T with T = O(r^{-2(k-1)}) in L^p; weak solution extends across 0"},
      {"Ric in C^{1,alpha}, " + a, "Sobolev embedding W^{2k-1,p} -> C^alpha for grad Ric"},
      {"g in C^{2,alpha}", "harmonic coordinates; elliptic regularity for g^{ij} d_ij g + Q(dg, g) = -Ric gives W^{3,p}"},
      {"g in C^{3,alpha}", "Ric in C^{1,alpha} in harmonic coordinates"},
      {"Ric in W^{2k+1," + p + "}", "one derivative of the system; right side O(r^{-2(k-1)}) in L^p"},
      {"Ric in C^{2,alpha}", "Sobolev embedding"},
      {"g in C^{4,alpha}", "elliptic regularity for the Ricci equation"},
  };
  return r;
}

}  // namespace ale
