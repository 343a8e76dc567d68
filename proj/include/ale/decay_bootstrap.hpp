#pragma once

// Exponent bookkeeping for the decay-improvement inductions at infinity and
// at an isolated singular point, and the regularity ladder at the origin.

#include <optional>
#include <string>
#include <vector>

#include "ale/rational.hpp"

namespace ale {

enum class Regime { infinity, origin };
std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

// j inverse-metric factors times a product of derivatives of h with orders alphas.
struct SchematicTerm {
  int j = 1;
  std::vector<int> alphas;

  // Decay (infinity) or vanishing (origin) order of the term when |h| has order h_order.
  Q order(const Q& h_order, Regime regime) const;
};

// Remainder of the obstruction tensor: the j = 1 term h * grad^{2(k+1)} h and,
// for 2 <= j <= j_max, every product with sum alphas = 2(k+1), alphas >= 0, j factors.
std::vector<SchematicTerm> obstruction_remainder_terms(int k, int j_max);
// Remainder of the scalar curvature: h * grad^2 h (j = 1, 2), grad h * grad h, grad h * grad h * h.
std::vector<SchematicTerm> scalar_remainder_terms();

// Order of the source of Lap^{k+1} h: 2 h_order + 2(k+1) at infinity,
// 2 h_order - 2(k+1) at the origin. Requires h_order > 0.
Q remainder_order(int k, int n, const Q& h_order, Regime regime);
double remainder_order(int k, int n, double h_order, Regime regime);

struct DecayStep {
  int step = 0;
  Q order;
  bool open = false;  // order means order - tau for every small tau > 0
  std::string mechanism;
  // Barrier steps: the finite-dimensional kill was recomputed and holds.
  std::optional<bool> verified;
};

struct DecayState {
  Regime regime = Regime::infinity;
  int n = 0, k = 0;
  Q initial, order, target;
  bool open = false;
  std::vector<int> barriers;  // exceptional integer degrees strictly between 0 and target
  std::vector<DecayStep> history;

  bool terminal() const { return order == target && !open; }
  // Initial order followed by every distinct order in the history.
  std::vector<Q> path() const;
};

DecayState bootstrap_infinity(int n, int k, const Q& beta0);
DecayState bootstrap_infinity(int n, int k, double beta0);
DecayState bootstrap_origin(int n, int k, const Q& sigma0);
DecayState bootstrap_origin(int n, int k, double sigma0);

struct LadderStep {
  std::string claim;
  std::string mechanism;
};

struct RegularityLadder {
  int n = 0, k = 0;
  bool p_infinite = false;
  double p = 0;        // meaningful when !p_infinite
  double epsilon = 0;  // 0 when k = 1
  double gap = 0;      // 2k - 1 - n/p
  bool gap_ok = false; // 0 < gap <= 1
  std::vector<LadderStep> steps;
};

// epsilon defaults to 1/(2(2k-1)) and must lie in (0, 1/(2k-1)).
RegularityLadder regularity_ladder(int n, int k, std::optional<double> epsilon = std::nullopt);

}  // namespace ale
