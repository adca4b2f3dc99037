#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rkstab/problems.hpp"
#include "rkstab/stability.hpp"

namespace rkstab {

// Floating copy of an explicit tableau for stepping.
template <class Real>
struct RkCoefficients {
  int s = 0;
  std::vector<Real> a;  // row-major s x s
  std::vector<Real> b, c;

  static RkCoefficients from(const ButcherTableau& tab) {
    if (!tab.is_explicit())
      throw std::invalid_argument("stepping requires an explicit tableau: " + tab.name);
    RkCoefficients rk;
    rk.s = tab.s;
    rk.a.resize(static_cast<size_t>(tab.s) * tab.s);
    rk.b.resize(tab.s);
    rk.c.resize(tab.s);
    for (int i = 0; i < tab.s; ++i) {
      rk.b[i] = static_cast<Real>(tab.b[i].to_long_double());
      rk.c[i] = static_cast<Real>(tab.c[i].to_long_double());
      for (int j = 0; j < tab.s; ++j)
        rk.a[static_cast<size_t>(i) * tab.s + j] =
            static_cast<Real>(tab.A.at(i, j).to_long_double());
    }
    return rk;
  }
};

// Stage values and stage derivatives of one step; reused across steps.
template <class Real>
struct StepWorkspace {
  std::vector<Real> stages;  // s x dim
  std::vector<Real> fvals;   // s x dim
  void resize(int s, int dim) {
    stages.assign(static_cast<size_t>(s) * dim, Real(0));
    fvals.assign(static_cast<size_t>(s) * dim, Real(0));
  }
};

// One explicit step from (t, u) to out; stage i uses t + c_i dt.
template <class Real>
void rk_step(const RkCoefficients<Real>& rk, const Problem<Real>& prob, Real t,
             std::span<const Real> u, Real dt, std::span<Real> out,
             StepWorkspace<Real>& ws) {
  int s = rk.s, dim = prob.dim;
  for (int i = 0; i < s; ++i) {
    Real* ui = ws.stages.data() + static_cast<size_t>(i) * dim;
    std::copy(u.begin(), u.end(), ui);
    for (int j = 0; j < i; ++j) {
      Real aij = rk.a[static_cast<size_t>(i) * s + j];
      if (aij == Real(0)) continue;
      const Real* fj = ws.fvals.data() + static_cast<size_t>(j) * dim;
      for (int d = 0; d < dim; ++d) ui[d] += dt * aij * fj[d];
    }
    prob.rhs(t + rk.c[i] * dt, std::span<const Real>(ui, dim),
             std::span<Real>(ws.fvals.data() + static_cast<size_t>(i) * dim, dim));
  }
  std::copy(u.begin(), u.end(), out.begin());
  for (int i = 0; i < s; ++i) {
    if (rk.b[i] == Real(0)) continue;
    const Real* fi = ws.fvals.data() + static_cast<size_t>(i) * dim;
    for (int d = 0; d < dim; ++d) out[d] += dt * rk.b[i] * fi[d];
  }
}

template <class Real>
Vec<Real> rk_step(const ButcherTableau& tab, const Problem<Real>& prob, Real t,
                  const Vec<Real>& u, Real dt) {
  auto rk = RkCoefficients<Real>::from(tab);
  StepWorkspace<Real> ws;
  ws.resize(rk.s, prob.dim);
  Vec<Real> out(prob.dim);
  rk_step<Real>(rk, prob, t, u, dt, out, ws);
  return out;
}

enum class VerdictKind { nonincreasing, increasing_detected, constant_within };

template <class Real>
struct SimulationTrace {
  std::vector<Real> times;
  std::vector<Real> energies;  // strided samples, first and last always present
  VerdictKind verdict = VerdictKind::nonincreasing;
  long first_increase_step = -1;  // 0-based step index that first grew the energy
  Real initial_energy = 0;
  Real final_energy = 0;
  Real max_relative_deviation = 0;  // max |E_n - E_0| / E_0
  long steps = 0;
};

template <class Real>
struct IntegrateOptions {
  Real increase_tolerance = Real(1e-13);  // relative per-step growth counted as real
  Real constant_tolerance = Real(1e-10);  // relative deviation for constant_within
  // secular growth: energy above the running minimum by this relative margin
  // counts as an increase even when every single step stays under tolerance
  Real growth_tolerance = Real(1e-10);
};

// n = floor(T / dt) full steps; no partial final step. The verdict scans every
// per-step energy, not just the strided samples.
template <class Real>
SimulationTrace<Real> integrate(const ButcherTableau& tab, const Problem<Real>& prob,
                                Vec<Real> u, Real dt, Real T, long stride = 1,
                                IntegrateOptions<Real> opts = {}) {
  if (!(dt > 0) || T < dt) throw std::invalid_argument("integrate: need dt > 0, T >= dt");
  if (stride < 1) stride = 1;
  auto rk = RkCoefficients<Real>::from(tab);
  StepWorkspace<Real> ws;
  ws.resize(rk.s, prob.dim);
  long n = static_cast<long>(std::floor(static_cast<double>(T / dt) + 1e-9));

  SimulationTrace<Real> trace;
  trace.steps = n;
  Real e = gram_energy<Real>(prob.gram_diag, u);
  trace.initial_energy = e;
  trace.times.push_back(0);
  trace.energies.push_back(e);

  Vec<Real> next(prob.dim);
  Real e_prev = e;
  Real e_min = e;
  Real max_dev = 0;
  for (long step = 0; step < n; ++step) {
    Real t = static_cast<Real>(step) * dt;
    rk_step<Real>(rk, prob, t, u, dt, next, ws);
    u.swap(next);
    Real e_now = gram_energy<Real>(prob.gram_diag, std::span<const Real>(u.data(), u.size()));
    if (trace.first_increase_step < 0 &&
        (e_now > e_prev + opts.increase_tolerance * std::abs(e_prev) ||
         e_now > e_min + opts.growth_tolerance * std::abs(e_min)))
      trace.first_increase_step = step;
    e_min = std::min(e_min, e_now);
    max_dev = std::max(max_dev, std::abs(e_now - trace.initial_energy));
    e_prev = e_now;
    if ((step + 1) % stride == 0 || step + 1 == n) {
      trace.times.push_back(static_cast<Real>(step + 1) * dt);
      trace.energies.push_back(e_now);
    }
  }
  trace.final_energy = e_prev;
  trace.max_relative_deviation = trace.initial_energy != Real(0)
                                     ? max_dev / std::abs(trace.initial_energy)
                                     : max_dev;
  if (trace.first_increase_step >= 0)
    trace.verdict = VerdictKind::increasing_detected;
  else if (trace.max_relative_deviation <= opts.constant_tolerance)
    trace.verdict = VerdictKind::constant_within;
  else
    trace.verdict = VerdictKind::nonincreasing;
  return trace;
}

template <class Real>
Real energy(const Problem<Real>& prob, const Vec<Real>& u) {
  return gram_energy<Real>(prob.gram_diag, std::span<const Real>(u.data(), u.size()));
}

// E(u_new) - E(u_old) evaluated as <u_new - u_old, u_new + u_old>_P, which
// avoids the cancellation of subtracting two near-equal energies.
template <class Real>
Real energy_difference(const Problem<Real>& prob, const Vec<Real>& u_new,
                       const Vec<Real>& u_old) {
  Real sum = 0;
  for (int i = 0; i < prob.dim; ++i)
    sum += prob.gram_diag[i] * (u_new[i] - u_old[i]) * (u_new[i] + u_old[i]);
  return sum;
}

// Residual of the exact per-step identity
//   |u+|^2 - |u0|^2 = 2 dt sum_i b_i <u_i, f_i> + dt^2 sum_ij M_ij <f_i, f_j>
// evaluated with the actual stages; roundoff-sized for a correct stepper.
template <class Real>
Real energy_identity_check(const ButcherTableau& tab, const Problem<Real>& prob, Real t,
                           const Vec<Real>& u, Real dt) {
  auto rk = RkCoefficients<Real>::from(tab);
  StepWorkspace<Real> ws;
  ws.resize(rk.s, prob.dim);
  Vec<Real> out(prob.dim);
  rk_step<Real>(rk, prob, t, u, dt, out, ws);

  Real lhs = gram_energy<Real>(prob.gram_diag, std::span<const Real>(out.data(), out.size())) -
             gram_energy<Real>(prob.gram_diag, std::span<const Real>(u.data(), u.size()));

  MatQ m = stability_matrix(tab);
  int dim = prob.dim;
  Real first = 0, second = 0;
  for (int i = 0; i < rk.s; ++i) {
    auto ui = std::span<const Real>(ws.stages.data() + static_cast<size_t>(i) * dim, dim);
    auto fi = std::span<const Real>(ws.fvals.data() + static_cast<size_t>(i) * dim, dim);
    first += rk.b[i] * gram_inner<Real>(prob.gram_diag, ui, fi);
    for (int j = 0; j < rk.s; ++j) {
      Real mij = static_cast<Real>(m.at(i, j).to_long_double());
      if (mij == Real(0)) continue;
      auto fj = std::span<const Real>(ws.fvals.data() + static_cast<size_t>(j) * dim, dim);
      second += mij * gram_inner<Real>(prob.gram_diag, fi, fj);
    }
  }
  Real rhs = 2 * dt * first + dt * dt * second;
  return std::abs(lhs - rhs);
}

// Exact rotation angle of the explicit midpoint method on the inverse square
// rotation problem: theta_h = arccos((r^2 - q)/(r^2 + q)), q = dt^2/(4 r^2).
template <class Real>
Real midpoint_rotation_angle(Real r0, Real dt) {
  if (!(r0 > 0)) throw std::invalid_argument("midpoint_rotation_angle: r0 must be positive");
  Real q = dt * dt / (4 * r0 * r0);
  Real r2 = r0 * r0;
  return std::acos((r2 - q) / (r2 + q));
}

template <class Real>
Vec<Real> midpoint_closed_form(Real r0, Real theta0, Real dt, long n) {
  Real th = theta0 + static_cast<Real>(n) * midpoint_rotation_angle<Real>(r0, dt);
  return {r0 * std::cos(th), r0 * std::sin(th)};
}

// CSV trace: header `t,energy`, full precision, one row per recorded sample.
template <class Real>
void write_trace_csv(std::ostream& os, const SimulationTrace<Real>& trace) {
  os << "t,energy\n";
  os.precision(std::numeric_limits<Real>::max_digits10);
  for (size_t i = 0; i < trace.times.size(); ++i)
    os << trace.times[i] << "," << trace.energies[i] << "\n";
}

inline std::string trace_file_name(const std::string& method, const std::string& problem,
                                   const std::string& dt_text) {
  return method + "_" + problem + "_" + dt_text + ".csv";
}

inline const char* verdict_name(VerdictKind v) {
  switch (v) {
    case VerdictKind::nonincreasing: return "nonincreasing";
    case VerdictKind::increasing_detected: return "increasing_detected";
    case VerdictKind::constant_within: return "constant_within";
  }
  return "?";
}

}  // namespace rkstab
