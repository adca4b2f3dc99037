#include "rkstab/search.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <sstream>

#include "rkstab/trees.hpp"

namespace rkstab {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Reduced rationals p/q with |p| <= 32, 1 <= q <= 32, sampled uniformly.
const std::vector<Rational>& sample_pool() {
  static const std::vector<Rational> pool = [] {
    std::vector<Rational> v;
    for (long q = 1; q <= 32; ++q)
      for (long p = -32; p <= 32; ++p) {
        if (std::gcd(std::abs(p), q) != 1 && !(p == 0 && q == 1)) continue;
        if (p == 0 && q != 1) continue;
        v.push_back(Rational(p, q));
      }
    return v;
  }();
  return pool;
}

const std::vector<Rational>& nonneg_pool() {
  static const std::vector<Rational> pool = [] {
    std::vector<Rational> v;
    for (const auto& r : sample_pool())
      if (r.sign() >= 0) v.push_back(r);
    return v;
  }();
  return pool;
}

Rational draw(const std::vector<Rational>& pool, std::uint64_t& state) {
  return pool[splitmix64(state) % pool.size()];
}

struct Candidate {
  ButcherTableau tab;
  bool ok = false;
};

// One sampling round: b from its linear system with nonnegative free entries,
// then the A entries from row sums, the stage identity, and (order 3) the
// chain condition; remaining A entries sampled from the signed pool.
Candidate sample_candidate(const SearchSpec& spec, std::uint64_t rng_state) {
  const int s = static_cast<int>(spec.nodes.size());
  const VecQ& c = spec.nodes;
  Candidate cand;

  int b_rows = spec.target_order >= 3 ? 3 : 2;
  MatQ bm(b_rows, s);
  VecQ brhs(b_rows);
  for (int j = 0; j < s; ++j) {
    bm.at(0, j) = Rational(1);
    bm.at(1, j) = c[j];
    if (b_rows > 2) bm.at(2, j) = c[j] * c[j];
  }
  brhs[0] = Rational(1);
  brhs[1] = Rational(1, 2);
  if (b_rows > 2) brhs[2] = Rational(1, 3);

  auto b = solve_linear(bm, brhs, [&](int) { return draw(nonneg_pool(), rng_state); });
  if (!b) return cand;
  for (const auto& bi : *b)
    if (bi.sign() < 0) return cand;

  // unknown x_m = a_ij with m = i(i-1)/2 + j, j < i
  int na = s * (s - 1) / 2;
  auto idx = [](int i, int j) { return i * (i - 1) / 2 + j; };
  std::vector<std::pair<VecQ, Rational>> eqs;
  for (int i = 1; i < s; ++i) {  // row sums (row 0 is empty)
    VecQ row(na);
    for (int j = 0; j < i; ++j) row[idx(i, j)] = Rational(1);
    eqs.push_back({std::move(row), c[i]});
  }
  for (int j = 0; j < s; ++j) {  // b_j(1 - c_j) = sum_{i>j} b_i a_ij
    VecQ row(na);
    bool nontrivial = false;
    for (int i = j + 1; i < s; ++i) {
      row[idx(i, j)] = (*b)[i];
      if (!(*b)[i].is_zero()) nontrivial = true;
    }
    Rational rhs = (*b)[j] * (Rational(1) - c[j]);
    if (!nontrivial && !rhs.is_zero()) return cand;  // unsatisfiable for this b
    eqs.push_back({std::move(row), rhs});
  }
  if (spec.target_order >= 3) {  // sum_i b_i sum_j a_ij c_j = 1/6
    VecQ row(na);
    for (int i = 1; i < s; ++i)
      for (int j = 0; j < i; ++j) row[idx(i, j)] = (*b)[i] * c[j];
    eqs.push_back({std::move(row), Rational(1, 6)});
  }

  MatQ am(static_cast<int>(eqs.size()), na);
  VecQ arhs(eqs.size());
  for (size_t r = 0; r < eqs.size(); ++r) {
    for (int m = 0; m < na; ++m) am.at(static_cast<int>(r), m) = eqs[r].first[m];
    arhs[r] = eqs[r].second;
  }
  auto a = solve_linear(am, arhs, [&](int) { return draw(sample_pool(), rng_state); });
  if (!a) return cand;

  cand.tab.name = "candidate";
  cand.tab.s = s;
  cand.tab.A = MatQ(s, s);
  for (int i = 1; i < s; ++i)
    for (int j = 0; j < i; ++j) cand.tab.A.at(i, j) = (*a)[idx(i, j)];
  cand.tab.b = *b;
  cand.tab.c = c;
  cand.ok = true;
  return cand;
}

int conditions_met(const VerifyReport& rep) {
  return static_cast<int>(rep.order_ok) + static_cast<int>(rep.explicit_ok) +
         static_cast<int>(rep.weights_nonnegative) + static_cast<int>(rep.row_sums_ok) +
         static_cast<int>(rep.stage_identity_ok) + static_cast<int>(rep.sign_not_violated) +
         static_cast<int>(rep.restricted_sum_negative);
}

std::string describe(const VerifyReport& rep) {
  std::ostringstream os;
  os << "order=" << rep.order << (rep.order_ok ? "(ok)" : "(short)")
     << " b>=0:" << (rep.weights_nonnegative ? "yes" : "no")
     << " rowsums:" << (rep.row_sums_ok ? "yes" : "no")
     << " stage-identity:" << (rep.stage_identity_ok ? "yes" : "no")
     << " sign-not-violated:" << (rep.sign_not_violated ? "yes" : "no")
     << " restricted-sum<0:" << (rep.restricted_sum_negative ? "yes" : "no");
  return os.str();
}

}  // namespace

VerifyReport verify_candidate(const ButcherTableau& tab, int target_order, int K) {
  VerifyReport rep;
  rep.explicit_ok = tab.is_explicit();
  rep.order = order_of_accuracy(tab, std::max(target_order, 1));
  rep.order_ok = rep.order >= target_order;
  rep.weights_nonnegative = true;
  for (const auto& bi : tab.b)
    if (bi.sign() < 0) rep.weights_nonnegative = false;
  rep.row_sums_ok = tab.row_sums_hold();

  rep.stage_identity_ok = true;
  for (int j = 0; j < tab.s; ++j) {
    Rational lhs = tab.b[j];
    for (int i = 0; i < tab.s; ++i) lhs -= tab.b[i] * tab.A.at(i, j);
    lhs -= tab.b[j] * tab.c[j];
    if (!lhs.is_zero()) {
      rep.stage_identity_ok = false;
      rep.stage_identity_violations.push_back(j);
    }
  }

  rep.verdict = sign_condition_verdict(tab, K);
  rep.sign_not_violated =
      rep.verdict.status != SignConditionVerdict::Status::violated_at_k;

  // the auxiliary condition of the construction recipe: the quadratic form
  // restricted to the stages with nodes 0 or 1, evaluated at k = 1
  MatQ m = stability_matrix(tab);
  Rational restricted;
  for (int i = 0; i < tab.s; ++i) {
    if (!(tab.c[i] == Rational(0) || tab.c[i] == Rational(1))) continue;
    for (int j = 0; j < tab.s; ++j) {
      if (!(tab.c[j] == Rational(0) || tab.c[j] == Rational(1))) continue;
      restricted += m.at(i, j) * tab.c[i] * tab.c[j];
    }
  }
  rep.restricted_sum = restricted;
  rep.restricted_sum_negative = restricted.sign() < 0;

  rep.pass = rep.explicit_ok && rep.order_ok && rep.weights_nonnegative &&
             rep.row_sums_ok && rep.stage_identity_ok && rep.sign_not_violated &&
             rep.restricted_sum_negative;
  return rep;
}

SearchOutcome construct_candidate(const SearchSpec& spec, Exec exec) {
  SearchOutcome out;
  const int s = static_cast<int>(spec.nodes.size());
  if (s < 2 || spec.target_order < 2 || spec.target_order > 3) {
    out.refused = true;
    out.message = "spec needs at least two stages and target order 2 or 3";
    return out;
  }
  if (!spec.nodes[0].is_zero()) {
    out.refused = true;
    out.message = "an explicit scheme with row sums needs c_1 = 0";
    return out;
  }

  Rational max_abs;
  for (const auto& ci : spec.nodes) max_abs = std::max(max_abs, ci.abs());
  int max_count = 0;
  for (const auto& ci : spec.nodes)
    if (ci.abs() == max_abs) ++max_count;
  if (!max_abs.is_zero() && max_count == 1) {
    out.refused = true;
    out.message =
        "refused: the largest |c_i| appears only once, so the unique-max-node "
        "theorem makes any method of order >= 2 on these nodes violate the sign "
        "condition; repeat the maximal node";
    return out;
  }
  if (max_abs.is_zero()) {
    out.refused = true;
    out.message = "refused: all nodes are zero, the order conditions are infeasible";
    return out;
  }

  long n = spec.max_iterations;
  long found = -1;
  ButcherTableau found_tab;
  int best_score = -1;
  std::string best_detail;

  auto run_iteration = [&](long iter, ButcherTableau& tab_out, int& score_out,
                           std::string& detail_out) -> bool {
    std::uint64_t state = spec.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(iter);
    Candidate cand = sample_candidate(spec, state);
    if (!cand.ok) {
      score_out = -1;
      return false;
    }
    VerifyReport rep = verify_candidate(cand.tab, spec.target_order, spec.K);
    score_out = conditions_met(rep);
    detail_out = describe(rep);
    if (rep.pass) {
      tab_out = cand.tab;
      return true;
    }
    return false;
  };

  if (exec == Exec::parallel) {
#ifdef RKSTAB_HAVE_OPENMP
    // Deterministic across thread counts: every iteration below the current
    // minimum success index is still evaluated, so the returned tableau is
    // always the one the serial scan would find.
    std::atomic<long> found_min{n};
#pragma omp parallel
    {
      long local_found = -1;
      ButcherTableau local_tab;
      int local_best = -1;
      long local_best_iter = n;
      std::string local_detail;
#pragma omp for schedule(dynamic, 64)
      for (long iter = 0; iter < n; ++iter) {
        if (iter > found_min.load(std::memory_order_relaxed)) continue;
        ButcherTableau tab;
        int score = -1;
        std::string detail;
        if (run_iteration(iter, tab, score, detail)) {
          if (local_found < 0 || iter < local_found) {
            local_found = iter;
            local_tab = tab;
          }
          long cur = found_min.load(std::memory_order_relaxed);
          while (iter < cur &&
                 !found_min.compare_exchange_weak(cur, iter, std::memory_order_relaxed)) {
          }
        } else if (score > local_best || (score == local_best && iter < local_best_iter)) {
          local_best = score;
          local_best_iter = iter;
          local_detail = detail;
        }
      }
#pragma omp critical
      {
        if (local_found >= 0 && (found < 0 || local_found < found)) {
          found = local_found;
          found_tab = local_tab;
        }
        if (local_best > best_score) {
          best_score = local_best;
          best_detail = local_detail;
        }
      }
    }
#else
    exec = Exec::serial;
#endif
  }
  if (exec == Exec::serial) {
    for (long iter = 0; iter < n && found < 0; ++iter) {
      ButcherTableau tab;
      int score = -1;
      std::string detail;
      if (run_iteration(iter, tab, score, detail)) {
        found = iter;
        found_tab = tab;
      } else if (score > best_score) {
        best_score = score;
        best_detail = detail;
      }
    }
  }

  out.iterations_used = n;
  out.found_at_iteration = found;
  out.best_conditions_met = best_score;
  out.best_detail = best_detail;
  if (found >= 0) {
    found_tab.name = "found_s" + std::to_string(s) + "_p" + std::to_string(spec.target_order);
    out.tableau = found_tab;
    out.message = "found at iteration " + std::to_string(found);
  } else if (best_score < 0) {
    out.message = "iteration budget exhausted; no sample produced a consistent "
                  "linear system for these nodes";
  } else {
    out.message = "iteration budget exhausted; best candidate met " +
                  std::to_string(best_score) + " of 7 conditions (" + best_detail + ")";
  }
  return out;
}

ScanStats scan_candidates(const SearchSpec& spec, Exec exec) {
  ScanStats stats;
  stats.iterations = spec.max_iterations;
  long n = spec.max_iterations;
  auto passes = [&](long iter) -> bool {
    std::uint64_t state = spec.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(iter);
    Candidate cand = sample_candidate(spec, state);
    if (!cand.ok) return false;
    return verify_candidate(cand.tab, spec.target_order, spec.K).pass;
  };
  long successes = 0, first = n;
  if (exec == Exec::parallel) {
#ifdef RKSTAB_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : successes) reduction(min : first)
    for (long iter = 0; iter < n; ++iter)
      if (passes(iter)) {
        ++successes;
        first = std::min(first, iter);
      }
#else
    exec = Exec::serial;
#endif
  }
  if (exec == Exec::serial) {
    for (long iter = 0; iter < n; ++iter)
      if (passes(iter)) {
        ++successes;
        first = std::min(first, iter);
      }
  }
  stats.successes = successes;
  stats.first_success = first < n ? first : -1;
  return stats;
}

ObstructionReport fourth_order_obstruction_report(const ButcherTableau& tab, int n_tot) {
  ObstructionReport rep;
  rep.order = order_of_accuracy(tab, 6);
  EnergyExpansion exp = expansion_coefficients(tab, n_tot, Exec::serial);
  const Rational* diag = exp.find(1, 1);
  if (diag) rep.ff_diagonal = *diag;

  Rational bc = dot(tab.b, tab.c);
  VecQ ac = tab.A * tab.c;
  for (int j = 0; j < tab.s; ++j) {
    Rational r = tab.b[j] * bc;
    for (int i = 0; i < tab.s; ++i) r -= tab.b[i] * tab.c[i] * tab.A.at(i, j);
    r -= tab.b[j] * ac[j];
    if (!r.is_zero()) rep.residuals_all_zero = false;
    rep.residuals.push_back(r);
  }

  for (const auto& term : exp.terms) {
    if (term.coeff.is_zero()) continue;
    if (term.t1 == 1 && term.t2 != 1) rep.nonzero_fpf_pairs.push_back(term.t2);
    else if (term.t2 == 1 && term.t1 != 1) rep.nonzero_fpf_pairs.push_back(term.t1);
  }
  return rep;
}

}  // namespace rkstab
