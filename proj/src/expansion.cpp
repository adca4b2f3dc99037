#include "rkstab/expansion.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rkstab {

const Rational* EnergyExpansion::find(int t1, int t2) const {
  if (t1 > t2) std::swap(t1, t2);
  for (const auto& term : terms)
    if (term.t1 == t1 && term.t2 == t2) return &term.coeff;
  return nullptr;
}

namespace {

std::vector<EnergyExpansion::Term> make_pairs(const TreeTable& tt, int max_total,
                                              int max_single) {
  std::vector<EnergyExpansion::Term> pairs;
  int n = static_cast<int>(tt.trees.size());
  for (int t1 = 0; t1 < n; ++t1) {
    if (tt.trees[t1].order > max_single) continue;
    for (int t2 = t1; t2 < n; ++t2) {
      if (tt.trees[t2].order > max_single) continue;
      if (tt.trees[t1].order + tt.trees[t2].order > max_total) continue;
      pairs.push_back({t1, t2, Rational()});
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [&](const EnergyExpansion::Term& x, const EnergyExpansion::Term& y) {
              int ox = tt.trees[x.t1].order + tt.trees[x.t2].order;
              int oy = tt.trees[y.t1].order + tt.trees[y.t2].order;
              if (ox != oy) return ox < oy;
              if (x.t1 != y.t1) return x.t1 < y.t1;
              return x.t2 < y.t2;
            });
  return pairs;
}

EnergyExpansion compute_expansion(const ButcherTableau& tab, int tree_order_cap,
                                  int max_total, int max_single, Exec exec) {
  EnergyExpansion exp;
  exp.max_total_order = max_total;
  exp.trees = std::make_shared<TreeTable>(enumerate_trees(tree_order_cap));
  const TreeTable& tt = *exp.trees;

  StageWeights sw(tab, tt);
  MatQ m = stability_matrix(tab);
  int ntrees = static_cast<int>(tt.trees.size());
  std::vector<VecQ> mw(ntrees);  // M * w(t)
  for (int id = 0; id < ntrees; ++id) mw[id] = m * sw.weights(id);

  exp.terms = make_pairs(tt, max_total, max_single);
  auto coeff_at = [&](EnergyExpansion::Term& term) {
    Rational bilinear = dot(sw.weights(term.t1), mw[term.t2]);
    Rational sym(term.t1 == term.t2 ? 1 : 2);
    term.coeff = sym * bilinear /
                 Rational(tt.trees[term.t1].sigma * tt.trees[term.t2].sigma);
  };

  auto n = static_cast<long>(exp.terms.size());
  if (exec == Exec::parallel) {
#ifdef RKSTAB_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (long i = 0; i < n; ++i) coeff_at(exp.terms[i]);
  } else {
    for (long i = 0; i < n; ++i) coeff_at(exp.terms[i]);
  }
  return exp;
}

}  // namespace

EnergyExpansion expansion_coefficients(const ButcherTableau& tab, int n_tot, Exec exec) {
  if (n_tot < 2 || n_tot > 8)
    throw std::invalid_argument("expansion_coefficients: n_tot must be in [2, 8]");
  return compute_expansion(tab, n_tot - 1, n_tot, n_tot - 1, exec);
}

EnergyExpansion expansion_by_stage_order(const ButcherTableau& tab, int stage_order,
                                         Exec exec) {
  if (stage_order < 1 || stage_order > 7)
    throw std::invalid_argument("expansion_by_stage_order: stage_order must be in [1, 7]");
  return compute_expansion(tab, stage_order, 2 * stage_order, stage_order, exec);
}

FirstOrderTermSign first_order_term_sign(const ButcherTableau& tab) {
  for (const auto& bi : tab.b)
    if (bi.sign() < 0) return FirstOrderTermSign::indefinite;
  return FirstOrderTermSign::nonpositive_guaranteed;
}

namespace {

std::string superscript(int n) { return "^" + std::to_string(n); }

std::string term_text(const TreeTable& tt, const EnergyExpansion::Term& term,
                      bool leading) {
  Rational c = term.coeff;
  std::string sign = c.sign() < 0 ? "-" : "+";
  std::string mag = c.abs().to_string();
  std::string body;
  if (term.t1 == term.t2)
    body = "|" + differential_to_string(tt, term.t1) + "|^2";
  else
    body = "<" + differential_to_string(tt, term.t1) + ", " +
           differential_to_string(tt, term.t2) + ">";
  std::string out;
  if (leading)
    out = (c.sign() < 0 ? "-" : "") + mag;
  else
    out = sign + " " + mag;
  return out + " " + body;
}

}  // namespace

std::string render_expansion(const EnergyExpansion& exp) {
  const TreeTable& tt = *exp.trees;
  std::vector<std::string> groups;
  int i = 0, n = static_cast<int>(exp.terms.size());
  while (i < n) {
    int order = exp.total_order(exp.terms[i]);
    std::vector<const EnergyExpansion::Term*> group;
    for (; i < n && exp.total_order(exp.terms[i]) == order; ++i)
      if (!exp.terms[i].coeff.is_zero()) group.push_back(&exp.terms[i]);
    if (group.empty()) continue;
    std::string text;
    if (group.size() == 1) {
      const auto& term = *group[0];
      std::string full = term_text(tt, term, true);
      auto space = full.find(' ');
      text = full.substr(0, space) + " dt" + superscript(order) + " " + full.substr(space + 1);
    } else {
      text = "dt" + superscript(order) + " [ ";
      for (size_t g = 0; g < group.size(); ++g)
        text += (g ? " " : "") + term_text(tt, *group[g], g == 0);
      text += " ]";
    }
    groups.push_back(std::move(text));
  }
  if (groups.empty()) return "0";
  std::string out = groups[0];
  for (size_t g = 1; g < groups.size(); ++g) out += " + " + groups[g];
  return out;
}

std::vector<std::string> expansion_machine_rows(const EnergyExpansion& exp) {
  const TreeTable& tt = *exp.trees;
  std::vector<std::string> rows;
  rows.reserve(exp.terms.size());
  for (const auto& term : exp.terms) {
    std::ostringstream row;
    row << exp.total_order(term) << " " << tree_to_string(tt, term.t1) << " "
        << tree_to_string(tt, term.t2) << " " << term.coeff.num().get_str() << " "
        << term.coeff.den().get_str();
    rows.push_back(row.str());
  }
  return rows;
}

}  // namespace rkstab
