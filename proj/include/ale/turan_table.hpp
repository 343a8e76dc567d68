#pragma once

// Constants for the Turan-type inequalities. A(d) of the discrete lemma is
// estimated (worst sampled ratio times a safety factor); the integral,
// sup-norm and three-interval constants follow from it through the chain of
// reductions in the proofs.

#include <array>
#include <cstdint>
#include <string>

namespace ale {

struct TuranTable {
  static constexpr int kMaxD = 8;
  std::array<double, kMaxD + 1> discrete{};  // index d, entry 0 unused
  double safety = 4.0;
  std::uint64_t seed = 0;
  long trials = 0;
  int m_max = 0;

  double discrete_at(int d) const;
  // d^2 4^{d-1} A(d): averaging the discrete lemma over the step size.
  double integral_at(int d) const;
  // 14 * 16^{d-1} times the integral constant: shifted form on [3R/2, 2R].
  double corollary_at(int d) const;

  static const TuranTable& shipped();
  static TuranTable regenerate(int m_max, long trials, std::uint64_t seed, double safety);
  std::string to_json() const;
};

}  // namespace ale
