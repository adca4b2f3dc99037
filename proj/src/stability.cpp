#include "rkstab/stability.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace rkstab {

MatQ stability_matrix(const ButcherTableau& tab) {
  int s = tab.s;
  MatQ m(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      m.at(i, j) = tab.b[i] * tab.b[j] - tab.b[i] * tab.A.at(i, j) - tab.b[j] * tab.A.at(j, i);
  return m;
}

bool is_negative_semidefinite(const MatQ& m) {
  if (!m.is_symmetric()) throw std::invalid_argument("is_negative_semidefinite: not symmetric");
  int n = m.rows;
  MatQ neg(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) neg.at(i, j) = -m.at(i, j);
  // -M is PSD iff det(lambda I + M) = lambda^n + ... has all signed minor sums
  // nonnegative: (-1)^k * [lambda^{n-k}] det(lambda I - (-M)) >= 0.
  std::vector<Rational> p = char_poly(neg);
  for (int k = 1; k <= n; ++k) {
    Rational signed_minor_sum = p[n - k];
    if (k % 2 == 1) signed_minor_sum = -signed_minor_sum;
    if (signed_minor_sum.sign() < 0) return false;
  }
  return true;
}

bool is_algebraically_stable(const ButcherTableau& tab) {
  for (const auto& bi : tab.b)
    if (bi.sign() < 0) return false;
  return is_negative_semidefinite(stability_matrix(tab));
}

Rational sign_condition_value(const ButcherTableau& tab, int k) {
  if (k < 1) throw std::invalid_argument("sign_condition_value: k must be >= 1");
  int s = tab.s;
  VecQ ck(s);
  for (int i = 0; i < s; ++i) ck[i] = tab.c[i].pow(static_cast<unsigned long>(k));
  Rational
      bck = dot(tab.b, ck);
  Rational quad;  // (c^k)^T diag(b) A c^k
  for (int i = 0; i < s; ++i) {
    if (tab.b[i].is_zero() || ck[i].is_zero()) continue;
    Rational row;
    for (int j = 0; j < s; ++j)
      if (!tab.A.at(i, j).is_zero()) row += tab.A.at(i, j) * ck[j];
    quad += ck[i] * tab.b[i] * row;
  }
  return bck * bck - Rational(2) * quad;
}

namespace {

// value(k) = sum over distinct products pi = c_i c_j of w(pi) * pi^k.
struct ProductSeries {
  std::vector<Rational> products;  // nonzero, weight != 0
  std::vector<Rational> weights;
};

ProductSeries product_series(const ButcherTableau& tab) {
  MatQ m = stability_matrix(tab);
  std::map<Rational, Rational> acc;
  for (int i = 0; i < tab.s; ++i)
    for (int j = 0; j < tab.s; ++j) {
      Rational pi = tab.c[i] * tab.c[j];
      if (pi.is_zero() || m.at(i, j).is_zero()) continue;
      acc[pi] += m.at(i, j);
    }
  ProductSeries ps;
  for (auto& [pi, w] : acc)
    if (!w.is_zero()) {
      ps.products.push_back(pi);
      ps.weights.push_back(w);
    }
  return ps;
}

Rational series_value(const ProductSeries& ps, int k) {
  Rational v;
  for (size_t l = 0; l < ps.products.size(); ++l)
    v += ps.weights[l] * ps.products[l].pow(static_cast<unsigned long>(k));
  return v;
}

// One parity class of the series: value over k of fixed parity collapses to
// sum over distinct magnitudes mu of W(mu) mu^k.
struct ParityClass {
  std::vector<Rational> magnitudes;  // descending, positive
  std::vector<Rational> weights;     // nonzero
};

ParityClass parity_class(const ProductSeries& ps, bool even) {
  std::map<Rational, Rational> acc;
  for (size_t l = 0; l < ps.products.size(); ++l) {
    Rational mu = ps.products[l].abs();
    Rational w = ps.weights[l];
    if (!even && ps.products[l].sign() < 0) w = -w;
    acc[mu] += w;
  }
  ParityClass pc;
  for (auto it = acc.rbegin(); it != acc.rend(); ++it)
    if (!it->second.is_zero()) {
      pc.magnitudes.push_back(it->first);
      pc.weights.push_back(it->second);
    }
  return pc;
}

// Smallest k >= 1 such that |W_top| mu_top^k strictly dominates the summed
// magnitude of all smaller terms; the ratio is monotone, so dominance at k0
// holds for every k >= k0. Returns 0 when not reached within the cap.
int dominance_threshold(const ParityClass& pc, int cap) {
  if (pc.magnitudes.empty()) return 0;
  Rational top_w = pc.weights[0].abs();
  Rational top_mu = pc.magnitudes[0];
  for (int k = 1; k <= cap; ++k) {
    Rational tail;
    for (size_t l = 1; l < pc.magnitudes.size(); ++l)
      tail += pc.weights[l].abs() * pc.magnitudes[l].pow(static_cast<unsigned long>(k));
    if (top_w * top_mu.pow(static_cast<unsigned long>(k)) > tail) return k;
  }
  return 0;
}

}  // namespace

SignConditionVerdict sign_condition_verdict(const ButcherTableau& tab, int K) {
  if (K < 1) throw std::invalid_argument("sign_condition_verdict: K must be >= 1");
  SignConditionVerdict v;
  v.tested_K = K;

  ProductSeries ps = product_series(tab);

  ParityClass even = parity_class(ps, true);
  ParityClass odd = parity_class(ps, false);

  // Asymptotic value(k) / (max c_i^2)^k: weight at the top magnitude.
  if (even.magnitudes.empty() && odd.magnitudes.empty()) {
    v.limit_kind = SignConditionVerdict::LimitKind::zero;
  } else if (!even.magnitudes.empty() && !odd.magnitudes.empty() &&
             even.magnitudes[0] == odd.magnitudes[0] && even.weights[0] == odd.weights[0]) {
    v.limit_kind = SignConditionVerdict::LimitKind::value;
    v.limit = even.weights[0];
  } else {
    v.limit_kind = SignConditionVerdict::LimitKind::mixed;
  }

  int scan_cap = std::max(4 * K, 512);

  // Eventual sign per parity from the dominant magnitude.
  bool even_empty = even.magnitudes.empty();
  bool odd_empty = odd.magnitudes.empty();
  int even_sign = even_empty ? 0 : even.weights[0].sign();
  int odd_sign = odd_empty ? 0 : odd.weights[0].sign();
  int k0_even = even_empty ? 1 : dominance_threshold(even, scan_cap);
  int k0_odd = odd_empty ? 1 : dominance_threshold(odd, scan_cap);

  bool eventually_positive = even_sign > 0 || odd_sign > 0;
  int check_to = K;
  if (eventually_positive && k0_even > 0 && k0_odd > 0)
    check_to = std::max({K, k0_even + 2, k0_odd + 2});
  check_to = std::min(check_to, scan_cap);

  for (int k = 1; k <= check_to; ++k) {
    if (series_value(ps, k).sign() > 0) {
      v.status = SignConditionVerdict::Status::violated_at_k;
      v.witness_k = k;
      return v;
    }
  }

  if (ps.products.empty()) {
    v.status = SignConditionVerdict::Status::negative_up_to_K_inconclusive;
    v.note = "value is identically zero for all k; never positive but not negative";
    return v;
  }

  if (even_sign < 0 && odd_sign < 0 && k0_even > 0 && k0_odd > 0) {
    int k0 = std::max(k0_even, k0_odd);
    bool all_negative_below = true;
    for (int k = 1; k <= k0 && all_negative_below; ++k)
      if (series_value(ps, k).sign() >= 0) all_negative_below = false;
    if (all_negative_below && k0 <= check_to) {
      v.status = SignConditionVerdict::Status::proved_negative_all_k;
      v.proved_from_k = k0;
      return v;
    }
    v.status = SignConditionVerdict::Status::negative_up_to_K_inconclusive;
    v.note = "dominant terms negative but a value of zero or an unreached threshold "
             "prevents a strict proof";
    return v;
  }

  v.status = SignConditionVerdict::Status::negative_up_to_K_inconclusive;
  if (even_sign == 0 || odd_sign == 0)
    v.note = "a parity class of the product series vanishes at the top magnitude";
  else
    v.note = "dominance threshold not reached within the scan cap";
  return v;
}

bool unique_max_node_test(const ButcherTableau& tab) {
  Rational max_abs;
  for (const auto& ci : tab.c) max_abs = std::max(max_abs, ci.abs());
  if (max_abs.is_zero()) return false;  // all nodes zero: no usable bushy weight
  int count = 0, arg = -1;
  for (int i = 0; i < tab.s; ++i)
    if (tab.c[i].abs() == max_abs) {
      ++count;
      arg = i;
    }
  return count == 1 && !tab.b[arg].is_zero();
}

StructuralReport structural_report(const ButcherTableau& tab) {
  StructuralReport rep;
  rep.is_explicit = tab.is_explicit();
  rep.nodes = node_report(tab);
  rep.has_unique_quadrature_node = !rep.nodes.unique_quadrature_nodes.empty();
  rep.has_shift_free_quadrature_node = !rep.nodes.integer_shift_free_quadrature_nodes.empty();
  rep.unique_max_node = unique_max_node_test(tab);
  return rep;
}

StabilityPolynomial stability_polynomial(const ButcherTableau& tab) {
  if (!tab.is_explicit())
    throw std::invalid_argument("stability_polynomial: tableau must be explicit");
  int s = tab.s;
  std::vector<Rational> xs, ys;
  for (int p = 0; p <= s; ++p) {
    Rational z(p);
    MatQ m = MatQ::identity(s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) m.at(i, j) += z * (tab.b[j] - tab.A.at(i, j));
    xs.push_back(z);
    ys.push_back(determinant(m));
  }
  StabilityPolynomial phi;
  phi.coeff = poly_interpolate(xs, ys);
  if (phi.coeff.empty()) phi.coeff.push_back(Rational(0));
  return phi;
}

ImaginaryAxisReport imaginary_axis_report(const StabilityPolynomial& phi) {
  // phi(iy) = R(y) + i I(y); |phi|^2 - 1 has even powers of y only.
  size_t d = phi.coeff.size();
  PolyQ re(d), im(d);
  for (size_t j = 0; j < d; ++j) {
    switch (j % 4) {
      case 0: re[j] = phi.coeff[j]; break;
      case 1: im[j] = phi.coeff[j]; break;
      case 2: re[j] = -phi.coeff[j]; break;
      case 3: im[j] = -phi.coeff[j]; break;
    }
  }
  PolyQ sq = poly_add(poly_mul(re, re), poly_mul(im, im));
  if (sq.empty()) sq.push_back(Rational(0));
  sq[0] -= Rational(1);

  ImaginaryAxisReport rep;
  rep.q.resize(sq.size() / 2 + 1);
  for (size_t j = 0; j < sq.size(); ++j) {
    if (j % 2 == 1) {
      if (!sq[j].is_zero())
        throw std::logic_error("imaginary_axis_report: odd power survived");
      continue;
    }
    rep.q[j / 2] = sq[j];
  }
  poly_trim(rep.q);

  bool any_pos = false, any_neg = false;
  for (size_t j = 0; j < rep.q.size(); ++j) {
    if (rep.q[j].sign() > 0) any_pos = true;
    if (rep.q[j].sign() < 0) any_neg = true;
    if (rep.lowest_power < 0 && !rep.q[j].is_zero()) {
      rep.lowest_power = static_cast<int>(j);
      rep.lowest_coeff = rep.q[j];
      rep.sign = rep.q[j].sign();
    }
  }
  if (rep.q.empty() || rep.lowest_power < 0) {
    rep.global = ImaginaryAxisReport::Global::zero;
  } else if (!any_neg) {
    rep.global = ImaginaryAxisReport::Global::positive_all_y;
  } else if (!any_pos) {
    rep.global = ImaginaryAxisReport::Global::negative_all_y;
  } else {
    rep.global = ImaginaryAxisReport::Global::mixed_sampled;
    for (int e = -24; e <= 24; ++e) {
      Rational x = e >= 0 ? Rational(1L << std::min(e, 30)) : Rational(1, 1L << std::min(-e, 30));
      if (poly_eval(rep.q, x).sign() > 0) {
        rep.sampled_growth = true;
        break;
      }
    }
  }
  return rep;
}

}  // namespace rkstab
