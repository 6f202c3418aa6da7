#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nhb/types.hpp"

namespace nhb::verify {

struct CriterionResult {
  int id = 0;
  std::string label;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

/// The full closed-form reproduction suite over the built-in two-level model
/// plus the Hermitian topology oracle. Each criterion is self-contained and
/// pinned to its published tolerance.
std::vector<CriterionResult> run_all(int workers, const Tolerances& tol = {});

void print_table(std::ostream& out, const std::vector<CriterionResult>& results);

bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace nhb::verify
