// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
// Arguments: [--fast] [--filter <substring>]
#include <cstring>
#include <iostream>

#include "rkstab/acceptance.hpp"

int main(int argc, char** argv) {
  rkstab::acceptance::Options opts;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--fast") == 0) opts.fast = true;
    else if (std::strcmp(argv[i], "--filter") == 0 && i + 1 < argc) opts.filter = argv[++i];
    else {
      std::cerr << "usage: acceptance [--fast] [--filter <substring>]\n";
      return 1;
    }
  }
  auto results = rkstab::acceptance::run(opts);
  int failures = rkstab::acceptance::print_results(results, std::cout);
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures))
            << " (" << results.size() << " run)\n";
  return failures == 0 ? 0 : 1;
}
