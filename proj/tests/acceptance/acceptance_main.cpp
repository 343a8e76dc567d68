// One line per acceptance criterion; exit status 1 if any fails.

#include <cstdio>

#include "ale/suites.hpp"

int main() {
  ale::SuiteOptions opts;
  int failed = 0;
  for (const auto& r : ale::run_acceptance_suites(opts)) {
    std::printf("%s  %2s  %-28s %8.2f s  %s\n", r.pass ? "PASS" : "FAIL", r.id.c_str(), r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
