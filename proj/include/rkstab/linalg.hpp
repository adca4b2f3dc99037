#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rkstab/rational.hpp"

namespace rkstab {

using VecQ = std::vector<Rational>;

struct MatQ {
  int rows = 0;
  int cols = 0;
  std::vector<Rational> a;

  MatQ() = default;
  MatQ(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  Rational& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Rational& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static MatQ identity(int n);
  MatQ transposed() const;
  bool is_symmetric() const;
};

MatQ operator*(const MatQ& x, const MatQ& y);
MatQ operator+(const MatQ& x, const MatQ& y);
MatQ operator-(const MatQ& x, const MatQ& y);
MatQ scale(const Rational& s, const MatQ& x);

VecQ operator*(const MatQ& m, const VecQ& v);
Rational dot(const VecQ& x, const VecQ& y);
Rational trace(const MatQ& m);

Rational determinant(MatQ m);

// Coefficients of det(lambda*I - m), index k = coefficient of lambda^k,
// size rows+1, leading coefficient 1. Faddeev-LeVerrier over exact rationals.
std::vector<Rational> char_poly(const MatQ& m);

// Row echelon solve of m*x = rhs where under-determined columns are filled by
// `free_value(col)`. Returns nullopt when the system is inconsistent.
std::optional<VecQ> solve_linear(MatQ m, VecQ rhs,
                                 const std::function<Rational(int)>& free_value);

// Dense polynomials over Q, coefficient index = power.
using PolyQ = std::vector<Rational>;

Rational poly_eval(const PolyQ& p, const Rational& x);
PolyQ poly_mul(const PolyQ& p, const PolyQ& q);
PolyQ poly_add(const PolyQ& p, const PolyQ& q);
void poly_trim(PolyQ& p);

// Unique polynomial of degree < points.size() through (x_i, y_i), exact.
PolyQ poly_interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

}  // namespace rkstab
