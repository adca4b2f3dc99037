#include "rkstab/trees.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace rkstab {

namespace {

int64_t factorial(int n) {
  int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

int TreeTable::bushy_id(int leaves) const {
  // Bushy tree of order leaves+1 sorts last within its order.
  int order = leaves + 1;
  if (order < 2 || order > max_order) throw std::invalid_argument("bushy_id: out of range");
  return order_first[order + 1] - 1;
}

int TreeTable::chain_id(int order) const {
  if (order < 1 || order > max_order) throw std::invalid_argument("chain_id: out of range");
  return order_first[order];  // chain sorts first within its order
}

TreeTable enumerate_trees(int max_order) {
  if (max_order < 1 || max_order > 10)
    throw std::invalid_argument("enumerate_trees: max_order must be in [1, 10]");

  TreeTable tt;
  tt.max_order = max_order;
  tt.order_first.assign(max_order + 2, 0);

  TreeTable::Tree leaf;
  leaf.order = 1;
  leaf.levels = {0};
  tt.trees.push_back(leaf);
  tt.order_first[1] = 0;
  tt.order_first[2] = 1;

  for (int order = 2; order <= max_order; ++order) {
    std::vector<TreeTable::Tree> batch;
    // Multisets of existing trees with total order == order-1, ids non-increasing.
    std::vector<int> chosen;
    auto emit = [&]() {
      TreeTable::Tree t;
      t.order = order;
      t.children = chosen;
      std::sort(t.children.begin(), t.children.end(), [&](int x, int y) {
        return tt.trees[x].levels > tt.trees[y].levels;
      });
      t.levels.push_back(0);
      for (int id : t.children)
        for (int8_t lv : tt.trees[id].levels) t.levels.push_back(static_cast<int8_t>(lv + 1));
      t.gamma = order;
      for (int id : t.children) t.gamma *= tt.trees[id].gamma;
      t.sigma = 1;
      for (size_t i = 0; i < t.children.size();) {
        size_t j = i;
        while (j < t.children.size() && t.children[j] == t.children[i]) ++j;
        int64_t mult = static_cast<int64_t>(j - i);
        t.sigma *= factorial(static_cast<int>(mult));
        for (size_t k = 0; k < static_cast<size_t>(mult); ++k)
          t.sigma *= tt.trees[t.children[i]].sigma;
        i = j;
      }
      batch.push_back(std::move(t));
    };
    auto rec = [&](auto&& self, int remaining, int max_id) -> void {
      if (remaining == 0) {
        emit();
        return;
      }
      for (int id = std::min(max_id, tt.order_first[remaining + 1] - 1); id >= 0; --id) {
        if (tt.trees[id].order > remaining) continue;
        chosen.push_back(id);
        self(self, remaining - tt.trees[id].order, id);
        chosen.pop_back();
      }
    };
    rec(rec, order - 1, static_cast<int>(tt.trees.size()) - 1);

    std::sort(batch.begin(), batch.end(),
              [](const TreeTable::Tree& x, const TreeTable::Tree& y) {
                return x.levels > y.levels;
              });
    tt.order_first[order] = static_cast<int>(tt.trees.size());
    for (auto& t : batch) tt.trees.push_back(std::move(t));
    tt.order_first[order + 1] = static_cast<int>(tt.trees.size());
  }
  return tt;
}

std::string tree_to_string(const TreeTable& tt, int id) {
  const auto& t = tt.trees[id];
  if (t.children.empty()) return "t";
  std::string s = "[";
  for (size_t i = 0; i < t.children.size(); ++i) {
    if (i) s += ",";
    s += tree_to_string(tt, t.children[i]);
  }
  s += "]";
  return s;
}

std::string differential_to_string(const TreeTable& tt, int id) {
  const auto& t = tt.trees[id];
  if (t.children.empty()) return "f";
  if (t.children.size() == 1) return "f'" + differential_to_string(tt, t.children[0]);
  std::string s = "f";
  s.append(t.children.size(), '\'');
  s += "(";
  for (size_t i = 0; i < t.children.size(); ++i) {
    if (i) s += ", ";
    s += differential_to_string(tt, t.children[i]);
  }
  s += ")";
  return s;
}

StageWeights::StageWeights(const ButcherTableau& tab, const TreeTable& tt)
    : tt_(&tt), b_(tab.b) {
  int s = tab.s;
  size_t n = tt.trees.size();
  w_.resize(n);
  std::vector<VecQ> aw(n);  // aw[id] = A * w[id]
  for (size_t id = 0; id < n; ++id) {
    const auto& t = tt.trees[id];
    VecQ w(s, Rational(1));
    for (int child : t.children)
      for (int i = 0; i < s; ++i) w[i] *= aw[child][i];
    aw[id] = tab.A * w;
    w_[id] = std::move(w);
  }
}

Rational StageWeights::elementary_weight(int tree_id) const {
  return dot(b_, w_[tree_id]);
}

Rational derivative_weight(const ButcherTableau& tab, const TreeTable& tt, int stage,
                           int tree_id) {
  return StageWeights(tab, tt).derivative_weight(stage, tree_id);
}

Rational elementary_weight(const ButcherTableau& tab, const TreeTable& tt, int tree_id) {
  return StageWeights(tab, tt).elementary_weight(tree_id);
}

int order_of_accuracy(const ButcherTableau& tab, int p_max) {
  if (p_max < 1) throw std::invalid_argument("order_of_accuracy: p_max must be >= 1");
  TreeTable tt = enumerate_trees(p_max);
  StageWeights sw(tab, tt);
  for (int p = 1; p <= p_max; ++p)
    for (int id = tt.order_first[p]; id < tt.order_first[p + 1]; ++id)
      if (sw.elementary_weight(id) * Rational(tt.trees[id].gamma) != Rational(1)) return p - 1;
  return p_max;
}

}  // namespace rkstab
