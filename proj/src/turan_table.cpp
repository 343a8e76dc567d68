#include "ale/turan_table.hpp"

#include <cmath>
#include "json.hpp"

#include "ale/errors.hpp"
#include "ale/expsum.hpp"
#include "ale/seeds.hpp"

namespace ale {

double TuranTable::discrete_at(int d) const {
  require(d >= 1 && d <= kMaxD, "Turan constant requested for d outside 1.." + std::to_string(kMaxD));
  return discrete[d];
}

double TuranTable::integral_at(int d) const {
  return static_cast<double>(d) * d * std::pow(4.0, d - 1) * discrete_at(d);
}

double TuranTable::corollary_at(int d) const { return 14.0 * std::pow(16.0, d - 1) * integral_at(d); }

const TuranTable& TuranTable::shipped() {
  // Output of `ale turan --regenerate-table` (m_max 10, 200000 draws per d,
  // seed 20240611), each worst ratio multiplied by 4.
  static const TuranTable table = [] {
    TuranTable t;
    t.discrete = {0.0,
                  4.0000000000000098,
                  54.185857670819857,
                  511.91502245909516,
                  7777.8473888165227,
                  30746.199412889382,
                  331939.29451975925,
                  327228.8573381934,
                  1097831.6839642513};
    t.safety = 4.0;
    t.seed = 20240611;
    t.trials = 200000;
    t.m_max = 10;
    return t;
  }();
  return table;
}

TuranTable TuranTable::regenerate(int m_max, long trials, std::uint64_t seed, double safety) {
  TuranTable t;
  t.safety = safety;
  t.seed = seed;
  t.trials = trials;
  t.m_max = m_max;
  for (int d = 1; d <= kMaxD; ++d)
    t.discrete[d] = safety * estimate_turan_constant(d, m_max, trials, derive_seed(seed, d)).value;
  return t;
}

std::string TuranTable::to_json() const {
  nlohmann::ordered_json j;
  j["safety"] = safety;
  j["seed"] = seed;
  j["trials"] = trials;
  j["m_max"] = m_max;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int d = 1; d <= kMaxD; ++d)
    rows.push_back({{"d", d}, {"discrete", discrete_at(d)}, {"integral", integral_at(d)}, {"corollary", corollary_at(d)}});
  j["constants"] = rows;
  return j.dump(2);
}

}  // namespace ale
