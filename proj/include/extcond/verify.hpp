#pragma once

#include <string>
#include <vector>

#include "extcond/model.hpp"

namespace extcond::verify {

struct SuiteResult {
  std::string name;
  int passed = 0;
  int failed = 0;
  double seconds = 0.0;
  std::vector<std::string> failures;  // first few messages

  bool ok() const { return failed == 0; }
};

// The acceptance criteria, one suite per numbered item.
std::vector<SuiteResult> run_acceptance_criteria(std::uint64_t seed, int threads);

// Additional per-module invariant suites (round trips, norm identities,
// linear-algebra properties) run by the verify command.
std::vector<SuiteResult> run_module_properties(std::uint64_t seed, int threads);

}  // namespace extcond::verify
