#pragma once

// Verification suites shared by the acceptance binary and `verify-all`.
// Acceptance suites carry a runtime budget; exceeding it fails the suite.

#include <cstdint>
#include <string>
#include <vector>

namespace ale {

struct SuiteOptions {
  std::uint64_t seed = 20240611;
  int jobs = 0;
  double tolerance = 1e-12;  // residual tolerance where a criterion pins 1e-12
};

struct SuiteResult {
  std::string id, module, name;
  bool acceptance = false;
  bool pass = false;
  bool error = false;  // threw instead of returning a verdict
  std::string detail;
  double seconds = 0;
  double budget = 0;  // 0: no budget
};

struct SuiteInfo {
  std::string id, module, name;
  bool acceptance = false;
  double budget = 0;
};

std::vector<SuiteInfo> suite_catalog();
SuiteResult run_suite(const std::string& id, const SuiteOptions& opts);
std::vector<SuiteResult> run_acceptance_suites(const SuiteOptions& opts);
// Acceptance suites first, then every module invariant suite.
std::vector<SuiteResult> run_all_suites(const SuiteOptions& opts);

}  // namespace ale
