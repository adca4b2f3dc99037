#pragma once

#include <string>
#include <vector>

#include "rkstab/tableau.hpp"

namespace rkstab {

// M_ij = b_i b_j - b_i a_ij - b_j a_ji, the quadratic form driving the
// second-order term of the energy change.
MatQ stability_matrix(const ButcherTableau& tab);

// Exact decision via characteristic-polynomial coefficient signs of -M
// (sums of principal minors), no floating eigenvalues.
bool is_negative_semidefinite(const MatQ& m);

bool is_algebraically_stable(const ButcherTableau& tab);

// sum_ij M_ij c_i^k c_j^k == (b.c^k)^2 - 2 (c^k)^T diag(b) A c^k, exact.
Rational sign_condition_value(const ButcherTableau& tab, int k);

struct SignConditionVerdict {
  enum class Status { proved_negative_all_k, violated_at_k, negative_up_to_K_inconclusive };
  enum class LimitKind { value, mixed, zero };

  Status status = Status::negative_up_to_K_inconclusive;
  int tested_K = 0;
  int witness_k = 0;      // smallest k with value > 0, when violated
  int proved_from_k = 0;  // dominance threshold, when proved
  LimitKind limit_kind = LimitKind::zero;
  Rational limit;         // lim value(k) / (max_i c_i^2)^k when it exists
  std::string note;
};

// Scans k = 1..K exactly; closes "for all k" rigorously when the value is an
// exponential polynomial in k whose dominant magnitude settles the sign
// (covers nodes within {0,1} and the distinct-node-magnitude case). Anything
// not settled stays inconclusive rather than claiming a proof.
SignConditionVerdict sign_condition_verdict(const ButcherTableau& tab, int K = 64);

// Hypothesis of the unique-largest-node theorem: exactly one stage attains
// max |c_i|, that maximum is nonzero, and its weight b is nonzero.
bool unique_max_node_test(const ButcherTableau& tab);

struct StructuralReport {
  bool is_explicit = false;
  NodeReport nodes;
  bool has_unique_quadrature_node = false;   // rules out energy stability for
                                             // non-autonomous linear problems
  bool has_shift_free_quadrature_node = false;  // unbounded-growth construction applies
  bool unique_max_node = false;              // with order >= 2: sign condition violated
};

StructuralReport structural_report(const ButcherTableau& tab);

struct StabilityPolynomial {
  PolyQ coeff;  // phi(z) = sum coeff[j] z^j
  int degree() const { return static_cast<int>(coeff.size()) - 1; }
};

// det(I - z A + z e b^T) for explicit tableaux (denominator det(I - z A) == 1).
// Throws std::invalid_argument for non-explicit input.
StabilityPolynomial stability_polynomial(const ButcherTableau& tab);

struct ImaginaryAxisReport {
  enum class Global { positive_all_y, negative_all_y, zero, mixed_sampled };

  PolyQ q;                 // |phi(iy)|^2 - 1 = q(y^2)
  int lowest_power = -1;   // exponent of y^2 in the lowest nonzero term
  Rational lowest_coeff;
  int sign = 0;            // sign of the lowest nonzero coefficient
  Global global = Global::zero;
  bool sampled_growth = false;  // in the mixed case: q > 0 found by sampling
};

// Small-y behaviour of |phi(iy)|^2 - 1, exact. Positive sign means growth for
// skew-symmetric constant-coefficient problems at small steps.
ImaginaryAxisReport imaginary_axis_report(const StabilityPolynomial& phi);

}  // namespace rkstab
