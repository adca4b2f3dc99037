#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rkstab/tableau.hpp"

namespace rkstab {

// Canonical unordered rooted trees up to a maximum order (node count).
// Canonical form: depth-first level sequence with child blocks arranged so the
// sequence is lexicographically maximal. Table ordering: order ascending, then
// level sequence lexicographically descending, which puts the chain first and
// the bushy tree last within each order.
struct TreeTable {
  struct Tree {
    int order = 0;
    std::vector<int> children;    // ids, level sequences descending
    std::vector<int8_t> levels;   // canonical level sequence, root = 0
    int64_t sigma = 1;            // symmetry: product over child groups m!*sigma^m
    int64_t gamma = 1;            // density: |t| * product of child densities
  };

  int max_order = 0;
  std::vector<Tree> trees;
  std::vector<int> order_first;  // order_first[k]..order_first[k+1] = ids of order k

  int count(int order) const { return order_first[order + 1] - order_first[order]; }
  std::span<const Tree> all() const { return trees; }

  int leaf_id() const { return 0; }
  // id of the tree whose root has `leaves` leaf children; leaves >= 1
  int bushy_id(int leaves) const;
  int chain_id(int order) const;  // id of the chain with `order` nodes
};

// 1 <= max_order <= 10; throws std::invalid_argument beyond the cap.
TreeTable enumerate_trees(int max_order);

// Nested bracket text: "t", "[t]", "[t,t]", "[[t]]", ...
std::string tree_to_string(const TreeTable& tt, int id);

// Elementary differential notation: "f", "f'f", "f''(f, f)", "f'f'f", ...
std::string differential_to_string(const TreeTable& tt, int id);

// Stage derivative weights (Phi_i D)(t) for one tableau over a tree table.
// w(leaf) = ones; w([t1..tm])_i = prod_k (A * w(t_k))_i. Exact.
class StageWeights {
public:
  StageWeights(const ButcherTableau& tab, const TreeTable& tt);

  const VecQ& weights(int tree_id) const { return w_[tree_id]; }
  Rational derivative_weight(int stage, int tree_id) const { return w_[tree_id][stage]; }
  Rational elementary_weight(int tree_id) const;  // sum_i b_i (Phi_i D)(t)

  const TreeTable& table() const { return *tt_; }

private:
  const TreeTable* tt_;
  VecQ b_;
  std::vector<VecQ> w_;
};

Rational derivative_weight(const ButcherTableau& tab, const TreeTable& tt, int stage,
                           int tree_id);
Rational elementary_weight(const ButcherTableau& tab, const TreeTable& tt, int tree_id);

// Largest p <= p_max with every order condition b.w(t) == 1/gamma(t), |t| <= p.
int order_of_accuracy(const ButcherTableau& tab, int p_max = 6);

}  // namespace rkstab
