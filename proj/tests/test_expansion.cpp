#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rkstab/catalog.hpp"
#include "rkstab/expansion.hpp"

using namespace rkstab;

namespace {

ButcherTableau get(const std::string& name) {
  auto tab = find_catalog_method(name);
  REQUIRE(tab.has_value());
  return *tab;
}

Rational coeff(const EnergyExpansion& exp, const std::string& t1, const std::string& t2) {
  const TreeTable& tt = *exp.trees;
  int id1 = -1, id2 = -1;
  for (size_t i = 0; i < tt.trees.size(); ++i) {
    if (tree_to_string(tt, static_cast<int>(i)) == t1) id1 = static_cast<int>(i);
    if (tree_to_string(tt, static_cast<int>(i)) == t2) id2 = static_cast<int>(i);
  }
  REQUIRE(id1 >= 0);
  REQUIRE(id2 >= 0);
  const Rational* c = exp.find(id1, id2);
  REQUIRE(c != nullptr);
  return *c;
}

}  // namespace

TEST_CASE("ssprk33 fourth order terms") {
  auto exp = expansion_coefficients(get("ssprk33"), 4);
  CHECK(coeff(exp, "t", "[[t]]") == Rational(1, 6));
  CHECK(coeff(exp, "t", "[t,t]") == Rational(-1, 12));
  CHECK(coeff(exp, "[t]", "[t]") == Rational(1, 12));
  // order >= 2 forces a zero {t,t} coefficient: (sum b)^2 - 2 sum b c = 0
  CHECK(coeff(exp, "t", "t") == Rational(0));
  CHECK(coeff(exp, "t", "[t]") == Rational(0));
}

TEST_CASE("the {t,t} coefficient vanishes exactly for every order >= 2 method") {
  for (const auto& name : catalog_names()) {
    ButcherTableau tab = get(name);
    if (order_of_accuracy(tab, 2) < 2) continue;
    auto exp = expansion_coefficients(tab, 2);
    CHECK(coeff(exp, "t", "t") == Rational(0));
  }
}

TEST_CASE("euler expansion: single |f|^2 term") {
  auto exp = expansion_coefficients(get("euler"), 2);
  CHECK(coeff(exp, "t", "t") == Rational(1));
}

TEST_CASE("test method expansion reproduces the printed coefficients") {
  auto exp = expansion_coefficients(get("paper_testmethod"), 8);
  CHECK(coeff(exp, "[t]", "[t]") == Rational(-1, 11));           // dt^4
  CHECK(coeff(exp, "[t]", "[[t]]") == Rational(-15, 176));       // dt^5
  CHECK(coeff(exp, "[t]", "[t,t]") == Rational(-49, 704));       // dt^5
  CHECK(coeff(exp, "[[t]]", "[[t]]") == Rational(225, 7744));    // dt^6
  CHECK(coeff(exp, "[[t]]", "[t,t]") == Rational(255, 30976));   // dt^6
  CHECK(coeff(exp, "[t,t]", "[t,t]") == Rational(-149, 30976));  // dt^6
  CHECK(coeff(exp, "[t,t,t]", "[t,t,t]") == Rational(1019, 1622016));  // dt^8

  // the remaining sixth order entries
  CHECK(coeff(exp, "[t]", "[[t,t]]") == Rational(-45, 2816));
  CHECK(coeff(exp, "[t]", "[[t],t]") == Rational(-15, 176));
  CHECK(coeff(exp, "[t]", "[t,t,t]") == Rational(-347, 16896));

  // the three stage explicit method annihilates the order four chain
  CHECK(coeff(exp, "[t]", "[[[t]]]") == Rational(0));

  // dt^8 pairs of [t] with the order six trees
  CHECK(coeff(exp, "[t]", "[[t,t,t,t]]") == Rational(-135, 720896));
  CHECK(coeff(exp, "[t]", "[[t,t,t],t]") == Rational(-45, 22528));
  CHECK(coeff(exp, "[t]", "[[t,t],[t]]") == Rational(-135, 11264));
  CHECK(coeff(exp, "[t]", "[[t,t],t,t]") == Rational(-45, 5632));
  CHECK(coeff(exp, "[t]", "[[t],[t],t]") == Rational(-45, 1408));
  CHECK(coeff(exp, "[t]", "[[t],t,t,t]") == Rational(-5, 352));
  // negative like every other <f'f, .> coefficient of this scheme
  CHECK(coeff(exp, "[t]", "[t,t,t,t,t]") == Rational(-20723, 21626880));
}

TEST_CASE("vanishing pairs for the scheme with nodes 0,1,0,1") {
  auto exp = expansion_coefficients(get("paper_c4s2"), 6);
  const TreeTable& tt = *exp.trees;
  for (const auto& term : exp.terms)
    if (term.t1 == 0)  // every pair containing the single node tree
      CHECK(term.coeff == Rational(0));
  CHECK(coeff(exp, "[t]", "[t]") == Rational(-1, 4));
  CHECK(coeff(exp, "[t,t]", "[t,t]") == Rational(-1, 16));
  CHECK(coeff(exp, "[t]", "[[t]]") == Rational(-1, 2));
  CHECK(tt.trees[0].order == 1);
}

TEST_CASE("cross identity: sign condition value vs bushy diagonal coefficient") {
  int64_t kfact[4] = {1, 1, 2, 6};
  for (const auto& name :
       {"ssprk33", "ssprk104", "paper_c4s2", "paper_c5s3", "paper_testmethod"}) {
    ButcherTableau tab = get(name);
    auto exp = expansion_coefficients(tab, 8);
    for (int k = 1; k <= 3; ++k) {
      const Rational* diag = exp.find(exp.trees->bushy_id(k), exp.trees->bushy_id(k));
      REQUIRE(diag != nullptr);
      Rational fac(kfact[k] * kfact[k]);
      CHECK(sign_condition_value(tab, k) == fac * (*diag));
    }
  }
}

TEST_CASE("expansion coefficients are invariant under pair order") {
  auto exp = expansion_coefficients(get("paper_testmethod"), 6);
  for (const auto& term : exp.terms) {
    CHECK(term.t1 <= term.t2);
    const Rational* swapped = exp.find(term.t2, term.t1);
    REQUIRE(swapped != nullptr);
    CHECK(*swapped == term.coeff);
  }
}

TEST_CASE("serial and parallel kernels agree exactly") {
  for (const auto& name : {"ssprk33", "ssprk104", "paper_testmethod", "paper_c5s3"}) {
    ButcherTableau tab = get(name);
    auto a = expansion_coefficients(tab, 8, Exec::serial);
    auto b = expansion_coefficients(tab, 8, Exec::parallel);
    REQUIRE(a.terms.size() == b.terms.size());
    for (size_t i = 0; i < a.terms.size(); ++i) {
      CHECK(a.terms[i].t1 == b.terms[i].t1);
      CHECK(a.terms[i].t2 == b.terms[i].t2);
      CHECK(a.terms[i].coeff == b.terms[i].coeff);
    }
  }
}

TEST_CASE("first order term sign") {
  CHECK(first_order_term_sign(get("ssprk33")) == FirstOrderTermSign::nonpositive_guaranteed);
  CHECK(first_order_term_sign(get("paper_c4s2")) == FirstOrderTermSign::nonpositive_guaranteed);
  CHECK(first_order_term_sign(get("paper_counterex")) == FirstOrderTermSign::indefinite);
}

TEST_CASE("rendering ssprk33 to fourth order") {
  auto exp = expansion_coefficients(get("ssprk33"), 4);
  CHECK(render_expansion(exp) ==
        "dt^4 [ 1/6 <f, f'f'f> - 1/12 <f, f''(f, f)> + 1/12 |f'f|^2 ]");
}

TEST_CASE("rendering the 0,1,0,1 scheme to fifth order") {
  auto exp = expansion_coefficients(get("paper_c4s2"), 5);
  CHECK(render_expansion(exp) ==
        "-1/4 dt^4 |f'f|^2 + dt^5 [ -1/2 <f'f, f'f'f> - 1/4 <f'f, f''(f, f)> ]");
}

TEST_CASE("rendering an all zero expansion") {
  // order >= 2 truncated at total order 2 keeps only the vanishing {t,t} pair
  auto exp = expansion_coefficients(get("ssprk33"), 2);
  CHECK(render_expansion(exp) == "0");
}

TEST_CASE("machine rows carry exact fractions and structural zeros") {
  auto exp = expansion_coefficients(get("ssprk33"), 4);
  auto rows = expansion_machine_rows(exp);
  REQUIRE(rows.size() == exp.terms.size());
  bool found = false;
  for (const auto& row : rows)
    if (row == "4 t [t,t] -1 12") found = true;
  CHECK(found);
  bool found_zero = false;
  for (const auto& row : rows)
    if (row == "2 t t 0 1") found_zero = true;
  CHECK(found_zero);
}

TEST_CASE("stage order truncation holds every pair up to the per tree cap") {
  auto exp = expansion_by_stage_order(get("ssprk33"), 4);
  const TreeTable& tt = *exp.trees;
  int max_single = 0, max_total = 0;
  for (const auto& term : exp.terms) {
    max_single = std::max({max_single, tt.trees[term.t1].order, tt.trees[term.t2].order});
    max_total = std::max(max_total, exp.total_order(term));
  }
  CHECK(max_single == 4);
  CHECK(max_total == 8);
  // pair count: unordered pairs over the 8 trees of order <= 4
  CHECK(exp.terms.size() == 8 * 9 / 2);
}
