#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rkstab/stability.hpp"
#include "rkstab/trees.hpp"

namespace rkstab {

enum class Exec { serial, parallel };

// Exact coefficients of the tree-pair expansion of the energy change. The
// stored coefficient of an unordered pair {t1, t2} merges both orders:
// C(t1,t2) + C(t2,t1) off the diagonal and C(t,t) on it, where
// C(t1,t2) = sum_ij M_ij (Phi_i D)(t1) (Phi_j D)(t2) / (sigma(t1) sigma(t2)).
// The merged value multiplies dt^{|t1|+|t2|} <F(t1)(u0), F(t2)(u0)>.
struct EnergyExpansion {
  struct Term {
    int t1 = 0;  // t1 <= t2 in table order
    int t2 = 0;
    Rational coeff;
  };

  int max_total_order = 0;
  std::shared_ptr<const TreeTable> trees;
  std::vector<Term> terms;  // ascending (|t1|+|t2|, t1, t2); zeros kept

  const Rational* find(int t1, int t2) const;
  int total_order(const Term& term) const {
    return trees->trees[term.t1].order + trees->trees[term.t2].order;
  }
};

// All unordered pairs with |t1| + |t2| <= n_tot (2 <= n_tot <= 8 by default cap).
EnergyExpansion expansion_coefficients(const ButcherTableau& tab, int n_tot,
                                       Exec exec = Exec::parallel);

// All unordered pairs with |t1|, |t2| <= stage_order. This matches the stage
// expansion truncation and leaves an O(dt^{stage_order+2}) remainder, which is
// what the stepping validator measures.
EnergyExpansion expansion_by_stage_order(const ButcherTableau& tab, int stage_order,
                                         Exec exec = Exec::parallel);

enum class FirstOrderTermSign { nonpositive_guaranteed, indefinite };

// The dt^1 term 2 dt sum_i b_i <u_i, f(u_i)> is nonpositive for semibounded f
// exactly when every b_i >= 0.
FirstOrderTermSign first_order_term_sign(const ButcherTableau& tab);

// Text in elementary-differential notation, nonzero terms grouped by dt power:
//   dt^4 [ 1/6 <f, f'f'f> - 1/12 <f, f''(f, f)> + 1/12 |f'f|^2 ]
// Diagonal pairs print as squared norms. All coefficients zero prints "0".
std::string render_expansion(const EnergyExpansion& exp);

// Machine rows "order tree1 tree2 num den", one line per stored pair.
std::vector<std::string> expansion_machine_rows(const EnergyExpansion& exp);

}  // namespace rkstab
