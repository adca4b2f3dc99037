#pragma once

#include "rkstab/expansion.hpp"
#include "rkstab/simulate.hpp"

namespace rkstab {

// Sum over stored pairs of coeff * <F(t1)(u0), F(t2)(u0)> restricted to one
// total order (no dt power attached).
template <class Real>
Real evaluate_expansion_order_part(const EnergyExpansion& exp,
                                   const std::vector<Vec<Real>>& diffs,
                                   const Vec<Real>& gram_diag, int total_order) {
  Real sum = 0;
  for (const auto& term : exp.terms) {
    if (exp.total_order(term) != total_order || term.coeff.is_zero()) continue;
    Real c = static_cast<Real>(term.coeff.to_long_double());
    sum += c * gram_inner<Real>(gram_diag,
                                std::span<const Real>(diffs[term.t1].data(), diffs[term.t1].size()),
                                std::span<const Real>(diffs[term.t2].data(), diffs[term.t2].size()));
  }
  return sum;
}

// Sum over all stored pairs of coeff * dt^{|t1|+|t2|} <F(t1)(u0), F(t2)(u0)>.
template <class Real>
Real evaluate_expansion(const EnergyExpansion& exp, const DifferentialOracle<Real>& oracle,
                        const Vec<Real>& gram_diag, const Vec<Real>& u0, Real dt) {
  int max_single = 0;
  for (const auto& term : exp.terms)
    max_single = std::max(max_single,
                          std::max(exp.trees->trees[term.t1].order,
                                   exp.trees->trees[term.t2].order));
  auto diffs = elementary_differentials<Real>(*exp.trees, oracle, u0, max_single);
  Real sum = 0;
  int lowest = 2, highest = exp.max_total_order;
  for (int order = lowest; order <= highest; ++order) {
    Real part = evaluate_expansion_order_part<Real>(exp, diffs, gram_diag, order);
    sum += part * std::pow(dt, Real(order));
  }
  return sum;
}

template <class Real>
struct ExpansionValidation {
  double slope = 0;             // log-log regression slope of the residual
  std::vector<Real> dts;        // points used for the fit
  std::vector<Real> residuals;
  int dropped_at_floor = 0;     // points below the roundoff floor, excluded
  Real floor = 0;
  // too few points above the floor for a fit; slope is meaningless then and
  // the series reproduced the measured change to roundoff
  bool at_floor = false;
};

// Measures Q(dt) = |u+|^2 - |u0|^2 - 2 dt sum_i b_i <u_i, f(u_i)> by direct
// stepping, subtracts the truncated tree series with per-tree order
// stage_order, and fits the decay rate of the residual. First omitted pairs
// carry dt^(stage_order+2), so the slope should reach stage_order + 2.
template <class Real>
ExpansionValidation<Real> validate_expansion_order(const ButcherTableau& tab,
                                                   const Problem<Real>& prob,
                                                   const Vec<Real>& u0, int stage_order,
                                                   std::span<const Real> dts) {
  if (dts.size() < 4)
    throw std::invalid_argument("validate_expansion_order: need at least 4 dt points");
  if (!prob.oracle)
    throw std::invalid_argument("validate_expansion_order: problem has no oracle");

  EnergyExpansion exp = expansion_by_stage_order(tab, stage_order);
  auto diffs = elementary_differentials<Real>(*exp.trees, *prob.oracle, u0, stage_order);

  auto rk = RkCoefficients<Real>::from(tab);
  StepWorkspace<Real> ws;
  ws.resize(rk.s, prob.dim);
  Vec<Real> out(prob.dim);

  Real e0 = gram_energy<Real>(prob.gram_diag, std::span<const Real>(u0.data(), u0.size()));
  ExpansionValidation<Real> val;
  val.floor = 256 * std::numeric_limits<Real>::epsilon() * std::max(std::abs(e0), Real(1));

  for (Real dt : dts) {
    rk_step<Real>(rk, prob, Real(0), u0, dt, out, ws);
    Real q = gram_energy<Real>(prob.gram_diag, std::span<const Real>(out.data(), out.size())) - e0;
    for (int i = 0; i < rk.s; ++i) {
      auto ui = std::span<const Real>(ws.stages.data() + static_cast<size_t>(i) * prob.dim,
                                      prob.dim);
      auto fi = std::span<const Real>(ws.fvals.data() + static_cast<size_t>(i) * prob.dim,
                                      prob.dim);
      q -= 2 * dt * rk.b[i] * gram_inner<Real>(prob.gram_diag, ui, fi);
    }
    Real series = 0;
    for (int order = 2; order <= exp.max_total_order; ++order)
      series += evaluate_expansion_order_part<Real>(exp, diffs, prob.gram_diag, order) *
                std::pow(dt, Real(order));
    Real residual = std::abs(q - series);
    if (residual < val.floor) {
      ++val.dropped_at_floor;
      continue;
    }
    val.dts.push_back(dt);
    val.residuals.push_back(residual);
  }
  if (val.dts.size() < 4) {
    val.at_floor = true;
    val.slope = std::numeric_limits<double>::quiet_NaN();
    return val;
  }

  // least squares slope of log residual vs log dt
  size_t n = val.dts.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    double x = std::log(static_cast<double>(val.dts[i]));
    double y = std::log(static_cast<double>(val.residuals[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  val.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return val;
}

}  // namespace rkstab
