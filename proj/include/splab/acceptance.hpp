#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace splab::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Options {
  std::uint64_t seed = 2026;
  /// Scale factor on sample sizes (1.0 = the desk-scale defaults).
  double budget = 1.0;
  /// Run only these criteria (empty = all ten).
  std::vector<int> only;
};

struct Summary {
  std::vector<CriterionResult> results;
  bool all_pass = true;
};

/// Run the acceptance criteria, streaming one pass/fail line per criterion.
Summary run_all(std::ostream& out, const Options& opt = {});

}  // namespace splab::acceptance
