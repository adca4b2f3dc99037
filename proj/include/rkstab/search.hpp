#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rkstab/expansion.hpp"
#include "rkstab/stability.hpp"

namespace rkstab {

// Node-first search for conditionally energy stable explicit methods: fix the
// c vector, solve the linear constraints for b and the dependent A entries
// exactly, sample the free entries from small rationals, verify exactly.
struct SearchSpec {
  VecQ nodes;
  int target_order = 2;  // 2 or 3
  int K = 64;
  std::uint64_t seed = 1;
  long max_iterations = 100000;
};

struct VerifyReport {
  bool pass = false;
  int order = 0;
  bool order_ok = false;
  bool explicit_ok = false;
  bool weights_nonnegative = false;       // b_i >= 0
  bool row_sums_ok = false;               // c_i = sum_j a_ij
  bool stage_identity_ok = false;         // b_j - sum_i b_i a_ij - b_j c_j = 0
  std::vector<int> stage_identity_violations;
  SignConditionVerdict verdict;
  bool sign_not_violated = false;
  Rational restricted_sum;                // quadratic form over stages with c in {0,1}, k=1
  bool restricted_sum_negative = false;
};

// Exact re-check of every construction condition, independent of provenance.
VerifyReport verify_candidate(const ButcherTableau& tab, int target_order, int K = 64);

struct SearchOutcome {
  std::optional<ButcherTableau> tableau;
  long iterations_used = 0;
  long found_at_iteration = -1;
  bool refused = false;        // structural refusal before any sampling
  std::string message;
  // closest-violation diagnostics when the budget runs out
  int best_conditions_met = -1;
  std::string best_detail;
};

SearchOutcome construct_candidate(const SearchSpec& spec, Exec exec = Exec::parallel);

// Full-budget scan without early exit: counts passing candidates over the
// whole iteration range. Used for success-density statistics and as the
// benchmark kernel; serial and parallel results are identical.
struct ScanStats {
  long iterations = 0;
  long successes = 0;
  long first_success = -1;
};

ScanStats scan_candidates(const SearchSpec& spec, Exec exec = Exec::parallel);

// Diagnostics for the order-four obstruction: the |f'f|^2 coefficient is
// forced to zero by the order conditions while mixed <f'f, .> pairs survive.
struct ObstructionReport {
  int order = 0;
  Rational ff_diagonal;             // stored {[t],[t]} coefficient
  std::vector<Rational> residuals;  // r_j = b_j (b.c) - sum_i b_i c_i a_ij - b_j (Ac)_j
  bool residuals_all_zero = true;
  std::vector<int> nonzero_fpf_pairs;  // partner tree ids of surviving <f'f, .> pairs
};

ObstructionReport fourth_order_obstruction_report(const ButcherTableau& tab, int n_tot = 6);

}  // namespace rkstab
