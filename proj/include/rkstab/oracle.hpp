#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rkstab/trees.hpp"

namespace rkstab {

template <class Real>
using Vec = std::vector<Real>;

// Directional derivatives of an autonomous right-hand side:
// eval(u, {v1..vm}) = f^(m)(u; v1..vm), multilinear and symmetric in the
// directions; m = 0 evaluates f(u) itself.
template <class Real>
struct DifferentialOracle {
  int max_depth = 0;
  std::function<Vec<Real>(const Vec<Real>& u, std::span<const Vec<Real>> dirs)> eval;
};

// F(t)(u0) for every tree in the table with order <= max_order:
// F(leaf) = f(u0), F([t1..tm]) = f^(m)(u0; F(t1)..F(tm)).
template <class Real>
std::vector<Vec<Real>> elementary_differentials(const TreeTable& tt,
                                                const DifferentialOracle<Real>& oracle,
                                                const Vec<Real>& u0, int max_order) {
  std::vector<Vec<Real>> f(tt.trees.size());
  for (size_t id = 0; id < tt.trees.size(); ++id) {
    const auto& t = tt.trees[id];
    if (t.order > max_order) break;
    int m = static_cast<int>(t.children.size());
    if (m > oracle.max_depth && m > 0)
      throw std::invalid_argument("elementary_differentials: oracle depth " +
                                  std::to_string(oracle.max_depth) + " < " +
                                  std::to_string(m));
    std::vector<Vec<Real>> dirs(m);
    for (int i = 0; i < m; ++i) dirs[i] = f[t.children[i]];
    f[id] = oracle.eval(u0, dirs);
  }
  return f;
}

template <class Real>
Real gram_inner(const Vec<Real>& diag, std::span<const Real> x, std::span<const Real> y) {
  Real r = 0;
  for (size_t i = 0; i < diag.size(); ++i) r += diag[i] * x[i] * y[i];
  return r;
}

template <class Real>
Real gram_energy(const Vec<Real>& diag, std::span<const Real> u) {
  return gram_inner<Real>(diag, u, u);
}

namespace detail {

// D^k (h o q)(u; w1..wk) for the quadratic q(u) = u.u via partitions of the
// direction set into singletons and pairs:
//   sum over partitions  h^(blocks)(q) * prod single 2(u.w) * prod pair 2(wi.wj)
template <class Real, class HDeriv>
Real quadratic_chain_derivative(const HDeriv& h, const Vec<Real>& u,
                                std::span<const Vec<Real>> dirs) {
  int k = static_cast<int>(dirs.size());
  Real q = 0;
  for (size_t i = 0; i < u.size(); ++i) q += u[i] * u[i];
  auto dot = [](const Vec<Real>& x, const Vec<Real>& y) {
    Real r = 0;
    for (size_t i = 0; i < x.size(); ++i) r += x[i] * y[i];
    return r;
  };
  std::vector<bool> used(k, false);
  Real total = 0;
  auto rec = [&](auto&& self, int blocks, Real partial) -> void {
    int first = -1;
    for (int i = 0; i < k; ++i)
      if (!used[i]) {
        first = i;
        break;
      }
    if (first < 0) {
      total += h(blocks, q) * partial;
      return;
    }
    used[first] = true;
    self(self, blocks + 1, partial * 2 * dot(u, dirs[first]));  // singleton
    for (int j = first + 1; j < k; ++j) {
      if (used[j]) continue;
      used[j] = true;
      self(self, blocks + 1, partial * 2 * dot(dirs[first], dirs[j]));  // pair
      used[j] = false;
    }
    used[first] = false;
  };
  rec(rec, 0, Real(1));
  return total;
}

}  // namespace detail

// Oracle for f(u) = phi(u) * K(u) (+ constant), K linear; derivatives combine
// the scalar chain term with one K(direction) term per direction:
//   f^(m)(u; v) = D^m phi (u; v) K(u) + sum_i D^(m-1) phi (u; v w/o i) K(v_i)
template <class Real, class Phi, class KApply>
Vec<Real> scalar_linear_product_derivative(const Phi& dphi, const KApply& K,
                                           const Vec<Real>& u,
                                           std::span<const Vec<Real>> dirs) {
  int m = static_cast<int>(dirs.size());
  Vec<Real> out = K(u);
  Real c = dphi(u, dirs);
  for (auto& x : out) x *= c;
  std::vector<Vec<Real>> reduced;
  reduced.reserve(m > 0 ? m - 1 : 0);
  for (int skip = 0; skip < m; ++skip) {
    reduced.clear();
    for (int i = 0; i < m; ++i)
      if (i != skip) reduced.push_back(dirs[i]);
    Real ci = dphi(u, std::span<const Vec<Real>>(reduced));
    Vec<Real> kv = K(dirs[skip]);
    for (size_t i = 0; i < out.size(); ++i) out[i] += ci * kv[i];
  }
  return out;
}

}  // namespace rkstab
