#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rkstab::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct Options {
  std::string filter;  // substring of the criterion name; empty runs everything
  bool fast = false;   // shorten the long advection run to its T = 5 variant
};

std::vector<CriterionResult> run(const Options& opts = {});

// One line per criterion; returns the number of failures.
int print_results(const std::vector<CriterionResult>& results, std::ostream& os);

}  // namespace rkstab::acceptance
