#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "rkstab/oracle.hpp"
#include "rkstab/tableau.hpp"

namespace rkstab {

// An ODE right-hand side u' = f(t, u) together with the diagonal Gram matrix
// defining the (semi) inner product, an optional derivative oracle for
// autonomous problems, and semiboundedness metadata.
template <class Real>
struct Problem {
  std::string name;
  int dim = 0;
  std::function<void(Real t, std::span<const Real> u, std::span<Real> du)> rhs;
  Vec<Real> gram_diag;
  std::optional<DifferentialOracle<Real>> oracle;
  bool semibounded = false;
  bool conservative = false;
  Vec<Real> default_u0;
};

// f(u) = |u|^2 (-u2, u1): cubic conservative rotation in R^2.
template <class Real>
Problem<Real> cubic_rotation() {
  auto J = [](const Vec<Real>& x) { return Vec<Real>{-x[1], x[0]}; };
  auto h = [](int order, Real q) -> Real {  // h(q) = q
    switch (order) {
      case 0: return q;
      case 1: return Real(1);
      default: return Real(0);
    }
  };
  auto dphi = [h, J](const Vec<Real>& u, std::span<const Vec<Real>> dirs) {
    return detail::quadratic_chain_derivative<Real>(h, u, dirs);
  };
  Problem<Real> p;
  p.name = "cubicrot";
  p.dim = 2;
  p.gram_diag = {Real(1), Real(1)};
  p.oracle = DifferentialOracle<Real>{
      8, [dphi, J](const Vec<Real>& u, std::span<const Vec<Real>> dirs) {
        return scalar_linear_product_derivative<Real>(dphi, J, u, dirs);
      }};
  auto eval = p.oracle->eval;
  p.rhs = [eval](Real, std::span<const Real> u, std::span<Real> du) {
    Vec<Real> uu(u.begin(), u.end());
    Vec<Real> f = eval(uu, {});
    std::copy(f.begin(), f.end(), du.begin());
  };
  p.semibounded = true;
  p.conservative = true;
  p.default_u0 = {Real(1), Real(0)};
  return p;
}

// f(u) = (-u2, u1) / |u|^2 on R^2 minus the origin.
template <class Real>
Problem<Real> inverse_square_rotation(int max_depth = 8) {
  auto J = [](const Vec<Real>& x) { return Vec<Real>{-x[1], x[0]}; };
  auto h = [](int order, Real q) -> Real {  // h(q) = 1/q, h^(b) = (-1)^b b! q^(-b-1)
    Real r = 1 / q;
    for (int b = 0; b < order; ++b) r *= -Real(b + 1) / q;
    return r;
  };
  auto dphi = [h](const Vec<Real>& u, std::span<const Vec<Real>> dirs) {
    Real q = 0;
    for (Real x : u) q += x * x;
    if (q == Real(0)) throw std::domain_error("inverse_square_rotation: u = 0");
    return detail::quadratic_chain_derivative<Real>(h, u, dirs);
  };
  Problem<Real> p;
  p.name = "invsqrot";
  p.dim = 2;
  p.gram_diag = {Real(1), Real(1)};
  p.oracle = DifferentialOracle<Real>{
      max_depth, [dphi, J](const Vec<Real>& u, std::span<const Vec<Real>> dirs) {
        return scalar_linear_product_derivative<Real>(dphi, J, u, dirs);
      }};
  auto eval = p.oracle->eval;
  p.rhs = [eval](Real, std::span<const Real> u, std::span<Real> du) {
    Vec<Real> uu(u.begin(), u.end());
    Vec<Real> f = eval(uu, {});
    std::copy(f.begin(), f.end(), du.begin());
  };
  p.semibounded = true;
  p.conservative = true;
  p.default_u0 = {Real(1), Real(0)};
  return p;
}

// R^3 with P = diag(0,1,1), f(u) = e1 + u1^k (0, -u3, u2), u0 = (0,1,0).
// At u0 the bushy elementary differential with l leaves is delta_{k,l} k! e3.
template <class Real>
Problem<Real> semiinner_bushy(int k) {
  if (k < 1) throw std::invalid_argument("semiinner_bushy: k must be >= 1");
  auto K = [](const Vec<Real>& x) { return Vec<Real>{Real(0), -x[2], x[1]}; };
  auto dphi = [k](const Vec<Real>& u, std::span<const Vec<Real>> dirs) -> Real {
    int m = static_cast<int>(dirs.size());
    if (m > k) return Real(0);
    Real coeff = 1;  // falling factorial k (k-1) ... (k-m+1)
    for (int i = 0; i < m; ++i) coeff *= Real(k - i);
    Real mono = 1;
    for (int i = 0; i < k - m; ++i) mono *= u[0];
    for (const auto& d : dirs) mono *= d[0];
    return coeff * mono;
  };
  Problem<Real> p;
  p.name = "bushy:" + std::to_string(k);
  p.dim = 3;
  p.gram_diag = {Real(0), Real(1), Real(1)};
  p.oracle = DifferentialOracle<Real>{
      8, [dphi, K](const Vec<Real>& u, std::span<const Vec<Real>> dirs) {
        Vec<Real> out = scalar_linear_product_derivative<Real>(dphi, K, u, dirs);
        if (dirs.empty()) out[0] += Real(1);  // affine part e1
        return out;
      }};
  auto eval = p.oracle->eval;
  p.rhs = [eval](Real, std::span<const Real> u, std::span<Real> du) {
    Vec<Real> uu(u.begin(), u.end());
    Vec<Real> f = eval(uu, {});
    std::copy(f.begin(), f.end(), du.begin());
  };
  p.semibounded = true;
  p.conservative = true;
  p.default_u0 = {Real(0), Real(1), Real(0)};
  return p;
}

// L(t) = sin(t) J: commuting skew family in R^2.
template <class Real>
Problem<Real> rotation_sin() {
  Problem<Real> p;
  p.name = "sinrot";
  p.dim = 2;
  p.gram_diag = {Real(1), Real(1)};
  p.rhs = [](Real t, std::span<const Real> u, std::span<Real> du) {
    Real s = std::sin(t);
    du[0] = -s * u[1];
    du[1] = s * u[0];
  };
  p.semibounded = true;
  p.conservative = true;
  p.default_u0 = {Real(1), Real(0)};
  return p;
}

// Periodic advection u_t + sin(t^2) u_x = 0 on [-1,1], central differences on
// m points; discrete energy dx sum u_i^2. Skew-symmetric, hence semibounded.
template <class Real>
Problem<Real> advection_sin_t2(int m) {
  if (m < 4) throw std::invalid_argument("advection_sin_t2: need at least 4 grid points");
  Real dx = Real(2) / Real(m);
  Problem<Real> p;
  p.name = m == 50 ? "advection50" : "advection:" + std::to_string(m);
  p.dim = m;
  p.gram_diag.assign(m, dx);
  p.rhs = [m, dx](Real t, std::span<const Real> u, std::span<Real> du) {
    Real factor = -std::sin(t * t) / (2 * dx);
    du[0] = factor * (u[1] - u[m - 1]);
    for (int i = 1; i + 1 < m; ++i) du[i] = factor * (u[i + 1] - u[i - 1]);
    du[m - 1] = factor * (u[0] - u[m - 2]);
  };
  p.semibounded = true;
  p.conservative = true;  // skew-symmetric operator conserves the exact energy
  p.default_u0.resize(m);
  for (int i = 0; i < m; ++i) {
    Real x = Real(-1) + Real(i) * dx;
    p.default_u0[i] = std::sin(Real(M_PI) * x);
  }
  return p;
}

// The spike construction: L(t) = lambda(t) J with a piecewise-linear hat that
// is eps at the protected node time c_k dt (mod dt in multi-step mode) and
// exactly zero at every other node time.
template <class Real>
struct SpikeProblem {
  Problem<Real> problem;
  Real center = 0;      // c_k dt
  Real half_width = 0;  // support radius; Lipschitz constant is eps/half_width
  Real amplitude = 0;
  Real weight_bk = 0;   // b_k as Real
  bool multi_step = false;

  Real lambda(Real t) const {
    Real d;
    if (multi_step) {
      Real dt_period = period;
      d = std::abs(std::remainder(t - center, dt_period));
    } else {
      d = std::abs(t - center);
    }
    Real v = 1 - d / half_width;
    return v > 0 ? amplitude * v : Real(0);
  }

  Real predicted_one_step_growth(Real energy0) const {
    return weight_bk * weight_bk * dt * dt * amplitude * amplitude * energy0;
  }

  Real dt = 0;
  Real period = 0;
};

template <class Real>
SpikeProblem<Real> spike_rotation(const ButcherTableau& tab, int k, Real dt, Real eps,
                                  bool multi_step) {
  if (k < 0 || k >= tab.s) throw std::invalid_argument("spike_rotation: stage out of range");
  if (!(dt > 0) || !(eps > 0))
    throw std::invalid_argument("spike_rotation: dt and eps must be positive");
  if (tab.b[k].is_zero())
    throw std::invalid_argument("spike_rotation: node " + std::to_string(k + 1) +
                                " is not a quadrature node (b = 0)");
  for (int j = 0; j < tab.s; ++j) {
    if (j == k) continue;
    if (tab.c[j] == tab.c[k])
      throw std::invalid_argument("spike_rotation: node " + std::to_string(k + 1) +
                                  " is not unique (shared with stage " +
                                  std::to_string(j + 1) + ")");
    if (multi_step && (tab.c[j] - tab.c[k]).is_integer())
      throw std::invalid_argument(
          "spike_rotation: integer node shift c_j - c_k between stages " +
          std::to_string(j + 1) + " and " + std::to_string(k + 1) +
          " blocks the multi-step construction");
  }

  SpikeProblem<Real> sp;
  sp.amplitude = eps;
  sp.multi_step = multi_step;
  sp.dt = dt;
  sp.period = dt;
  sp.center = static_cast<Real>(tab.c[k].to_long_double()) * dt;
  sp.weight_bk = static_cast<Real>(tab.b[k].to_long_double());

  Real min_dist = dt / 2;  // covers the single-stage method
  bool any = false;
  for (int j = 0; j < tab.s; ++j) {
    if (j == k) continue;
    Rational diff = tab.c[j] - tab.c[k];
    Real d;
    if (multi_step) {
      // circular distance of the node offset modulo one step
      Rational frac = diff - Rational(static_cast<long>(std::floor(diff.to_double())));
      if (frac < Rational(0)) frac += Rational(1);
      Rational circ = std::min(frac, Rational(1) - frac);
      d = static_cast<Real>(circ.to_long_double()) * dt;
    } else {
      d = std::abs(static_cast<Real>(diff.to_long_double())) * dt;
    }
    min_dist = any ? std::min(min_dist, d) : d;
    any = true;
  }
  sp.half_width = min_dist / 2;

  Problem<Real>& p = sp.problem;
  p.name = "spike:" + tab.name + ":" + std::to_string(k + 1);
  p.dim = 2;
  p.gram_diag = {Real(1), Real(1)};
  Real center = sp.center, half_width = sp.half_width, period = sp.period;
  bool multi = sp.multi_step;
  p.rhs = [center, half_width, eps, period, multi](Real t, std::span<const Real> u,
                                                   std::span<Real> du) {
    Real d = multi ? std::abs(std::remainder(t - center, period)) : std::abs(t - center);
    Real v = 1 - d / half_width;
    Real l = v > 0 ? eps * v : Real(0);
    du[0] = -l * u[1];
    du[1] = l * u[0];
  };
  p.semibounded = true;
  p.conservative = true;
  p.default_u0 = {Real(1), Real(0)};
  return sp;
}

}  // namespace rkstab

#include "rkstab/catalog.hpp"

namespace rkstab {

// Catalog lookup: "cubicrot", "invsqrot", "sinrot", "advection50",
// "advection:<m>", "bushy:<k>", "spike:<method>:<k>" (k is a 1-based stage).
// dt and eps feed the spike construction only.
template <class Real>
Problem<Real> resolve_problem(const std::string& name, Real dt = Real(1) / 100,
                              Real eps = Real(1) / 1000) {
  if (name == "cubicrot") return cubic_rotation<Real>();
  if (name == "invsqrot") return inverse_square_rotation<Real>();
  if (name == "sinrot") return rotation_sin<Real>();
  if (name == "advection50") return advection_sin_t2<Real>(50);
  auto num_after = [&](const std::string& prefix) -> std::optional<int> {
    if (name.rfind(prefix, 0) != 0) return std::nullopt;
    try {
      return std::stoi(name.substr(prefix.size()));
    } catch (...) {
      throw std::invalid_argument("bad problem name '" + name + "'");
    }
  };
  if (auto m = num_after("advection:")) return advection_sin_t2<Real>(*m);
  if (auto k = num_after("bushy:")) return semiinner_bushy<Real>(*k);
  if (name.rfind("spike:", 0) == 0) {
    auto rest = name.substr(6);
    auto colon = rest.rfind(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("spike problem needs 'spike:<method>:<stage>'");
    ButcherTableau tab = resolve_method(rest.substr(0, colon));
    int k = std::stoi(rest.substr(colon + 1));
    return spike_rotation<Real>(tab, k - 1, dt, eps, true).problem;
  }
  throw std::invalid_argument("unknown problem '" + name + "'");
}

}  // namespace rkstab
