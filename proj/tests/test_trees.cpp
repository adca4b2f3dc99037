#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "rkstab/catalog.hpp"
#include "rkstab/trees.hpp"

using namespace rkstab;

namespace {

// Independent oracle for the rooted tree counts: the classical recurrence
//   (n) a(n+1) = sum_{k=1..n} ( sum_{d | k} d a(d) ) a(n-k+1),  a(1) = 1,
// computed with plain integers, no tree structures involved.
std::vector<long> rooted_tree_counts(int n_max) {
  std::vector<long> a(n_max + 1, 0);
  a[1] = 1;
  for (int n = 1; n < n_max; ++n) {
    long total = 0;
    for (int k = 1; k <= n; ++k) {
      long divsum = 0;
      for (int d = 1; d <= k; ++d)
        if (k % d == 0) divsum += d * a[d];
      total += divsum * a[n - k + 1];
    }
    a[n + 1] = total / n;
  }
  return a;
}

int64_t factorial(int n) {
  int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

int64_t ipow(int64_t b, int e) {
  int64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST_CASE("tree counts match the independent recurrence and the known prefix") {
  TreeTable tt = enumerate_trees(8);
  auto oracle = rooted_tree_counts(8);
  std::vector<int> expected{1, 1, 2, 4, 9, 20, 48, 115};
  for (int n = 1; n <= 8; ++n) {
    CHECK(tt.count(n) == oracle[n]);
    CHECK(tt.count(n) == expected[n - 1]);
  }
}

TEST_CASE("enumeration cap") {
  CHECK_THROWS_AS(enumerate_trees(0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_trees(11), std::invalid_argument);
  CHECK(enumerate_trees(1).trees.size() == 1);
}

TEST_CASE("canonical level sequences are unique and ordered") {
  TreeTable tt = enumerate_trees(8);
  std::set<std::vector<int8_t>> seen;
  for (const auto& t : tt.trees) {
    CHECK(seen.insert(t.levels).second);
    CHECK(static_cast<int>(t.levels.size()) == t.order);
  }
  for (int n = 1; n <= 8; ++n)
    for (int id = tt.order_first[n]; id + 1 < tt.order_first[n + 1]; ++id)
      CHECK(tt.trees[id].levels > tt.trees[id + 1].levels);
}

TEST_CASE("order three and four trees in the expected print order") {
  TreeTable tt = enumerate_trees(4);
  CHECK(tree_to_string(tt, 0) == "t");
  CHECK(tree_to_string(tt, 1) == "[t]");
  CHECK(tree_to_string(tt, tt.order_first[3]) == "[[t]]");
  CHECK(tree_to_string(tt, tt.order_first[3] + 1) == "[t,t]");
  CHECK(tree_to_string(tt, tt.order_first[4] + 0) == "[[[t]]]");
  CHECK(tree_to_string(tt, tt.order_first[4] + 1) == "[[t,t]]");
  CHECK(tree_to_string(tt, tt.order_first[4] + 2) == "[[t],t]");
  CHECK(tree_to_string(tt, tt.order_first[4] + 3) == "[t,t,t]");
}

TEST_CASE("differential rendering") {
  TreeTable tt = enumerate_trees(4);
  CHECK(differential_to_string(tt, 0) == "f");
  CHECK(differential_to_string(tt, 1) == "f'f");
  CHECK(differential_to_string(tt, tt.chain_id(3)) == "f'f'f");
  CHECK(differential_to_string(tt, tt.bushy_id(2)) == "f''(f, f)");
  CHECK(differential_to_string(tt, tt.order_first[4] + 1) == "f'f''(f, f)");
  CHECK(differential_to_string(tt, tt.order_first[4] + 2) == "f''(f'f, f)");
  CHECK(differential_to_string(tt, tt.bushy_id(3)) == "f'''(f, f, f)");
}

TEST_CASE("sigma and gamma on the small trees") {
  TreeTable tt = enumerate_trees(4);
  CHECK(tt.trees[0].sigma == 1);
  CHECK(tt.trees[0].gamma == 1);
  CHECK(tt.trees[1].gamma == 2);           // [t]
  CHECK(tt.trees[tt.chain_id(3)].sigma == 1);
  CHECK(tt.trees[tt.chain_id(3)].gamma == 6);
  CHECK(tt.trees[tt.bushy_id(2)].sigma == 2);
  CHECK(tt.trees[tt.bushy_id(2)].gamma == 3);
  CHECK(tt.trees[tt.bushy_id(3)].sigma == 6);  // three identical leaf children
}

TEST_CASE("labelling identities tie together sigma, gamma, and the enumeration") {
  // alpha(t) = |t|! / (sigma gamma) counts increasing labellings: each is a
  // positive integer and they sum to (n-1)! over the trees of order n.
  // n!/sigma counts distinct labellings and sums to n^(n-1).
  TreeTable tt = enumerate_trees(8);
  for (int n = 1; n <= 8; ++n) {
    int64_t alpha_sum = 0, label_sum = 0;
    for (int id = tt.order_first[n]; id < tt.order_first[n + 1]; ++id) {
      const auto& t = tt.trees[id];
      int64_t fact = factorial(n);
      CHECK(fact % (t.sigma * t.gamma) == 0);
      alpha_sum += fact / (t.sigma * t.gamma);
      CHECK(fact % t.sigma == 0);
      label_sum += fact / t.sigma;
    }
    CHECK(alpha_sum == factorial(n - 1));
    CHECK(label_sum == ipow(n, n - 1));
  }
}

TEST_CASE("derivative weights: base case, chain, bushy") {
  TreeTable tt = enumerate_trees(6);
  auto ssprk33 = *find_catalog_method("ssprk33");
  StageWeights sw(ssprk33, tt);

  for (int i = 0; i < 3; ++i) CHECK(sw.derivative_weight(i, 0) == Rational(1));
  CHECK(sw.derivative_weight(2, tt.chain_id(3)) == Rational(1, 4));

  // bushy weights equal c_i^k for every catalog method satisfying row sums
  for (const auto& name : catalog_names()) {
    auto tab = *find_catalog_method(name);
    REQUIRE(tab.row_sums_hold());
    StageWeights w(tab, tt);
    for (int k = 1; k <= 5; ++k)
      for (int i = 0; i < tab.s; ++i)
        CHECK(w.derivative_weight(i, tt.bushy_id(k)) ==
              tab.c[i].pow(static_cast<unsigned long>(k)));
  }
}

TEST_CASE("elementary weights of ssprk33") {
  TreeTable tt = enumerate_trees(4);
  auto tab = *find_catalog_method("ssprk33");
  StageWeights sw(tab, tt);
  CHECK(sw.elementary_weight(0) == Rational(1));
  CHECK(sw.elementary_weight(1) == Rational(1, 2));
  CHECK(sw.elementary_weight(tt.bushy_id(2)) == Rational(1, 3));
  // third order method: all conditions hold to order 3, some order 4 fails
  for (int id = tt.order_first[1]; id < tt.order_first[4]; ++id)
    CHECK(sw.elementary_weight(id) * Rational(tt.trees[id].gamma) == Rational(1));
  bool some_order4_fails = false;
  for (int id = tt.order_first[4]; id < tt.order_first[5]; ++id)
    if (sw.elementary_weight(id) * Rational(tt.trees[id].gamma) != Rational(1))
      some_order4_fails = true;
  CHECK(some_order4_fails);
}
