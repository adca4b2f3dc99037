#include "rkstab/linalg.hpp"

#include <stdexcept>

namespace rkstab {

MatQ MatQ::identity(int n) {
  MatQ m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
  return m;
}

MatQ MatQ::transposed() const {
  MatQ t(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
  return t;
}

bool MatQ::is_symmetric() const {
  if (rows != cols) return false;
  for (int i = 0; i < rows; ++i)
    for (int j = i + 1; j < cols; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

MatQ operator*(const MatQ& x, const MatQ& y) {
  if (x.cols != y.rows) throw std::invalid_argument("MatQ: shape mismatch in product");
  MatQ r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      if (x.at(i, k).is_zero()) continue;
      for (int j = 0; j < y.cols; ++j) r.at(i, j) += x.at(i, k) * y.at(k, j);
    }
  return r;
}

MatQ operator+(const MatQ& x, const MatQ& y) {
  MatQ r(x.rows, x.cols);
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
  return r;
}

MatQ operator-(const MatQ& x, const MatQ& y) {
  MatQ r(x.rows, x.cols);
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

MatQ scale(const Rational& s, const MatQ& x) {
  MatQ r(x.rows, x.cols);
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = s * x.a[i];
  return r;
}

VecQ operator*(const MatQ& m, const VecQ& v) {
  if (m.cols != static_cast<int>(v.size()))
    throw std::invalid_argument("MatQ: shape mismatch in mat-vec");
  VecQ r(m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (!m.at(i, j).is_zero()) r[i] += m.at(i, j) * v[j];
  return r;
}

Rational dot(const VecQ& x, const VecQ& y) {
  Rational r;
  for (size_t i = 0; i < x.size(); ++i) r += x[i] * y[i];
  return r;
}

Rational trace(const MatQ& m) {
  Rational t;
  for (int i = 0; i < m.rows; ++i) t += m.at(i, i);
  return t;
}

Rational determinant(MatQ m) {
  if (m.rows != m.cols) throw std::invalid_argument("determinant: not square");
  int n = m.rows;
  Rational det(1);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (!m.at(r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) return Rational(0);
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(m.at(pivot, j), m.at(col, j));
      det = -det;
    }
    det *= m.at(col, col);
    Rational inv = m.at(col, col).inv();
    for (int r = col + 1; r < n; ++r) {
      if (m.at(r, col).is_zero()) continue;
      Rational f = m.at(r, col) * inv;
      for (int j = col; j < n; ++j) m.at(r, j) -= f * m.at(col, j);
    }
  }
  return det;
}

std::vector<Rational> char_poly(const MatQ& m) {
  if (m.rows != m.cols) throw std::invalid_argument("char_poly: not square");
  int n = m.rows;
  std::vector<Rational> p(n + 1);
  p[n] = Rational(1);
  MatQ mk = m;
  Rational ck = trace(mk);
  p[n - 1] = -ck;
  for (int k = 2; k <= n; ++k) {
    for (int i = 0; i < n; ++i) mk.at(i, i) -= ck;
    mk = m * mk;
    ck = trace(mk) / Rational(k);
    p[n - k] = -ck;
  }
  return p;
}

std::optional<VecQ> solve_linear(MatQ m, VecQ rhs,
                                 const std::function<Rational(int)>& free_value) {
  int nrows = m.rows, ncols = m.cols;
  std::vector<int> pivot_col(nrows, -1);
  int row = 0;
  for (int col = 0; col < ncols && row < nrows; ++col) {
    int pr = -1;
    for (int r = row; r < nrows; ++r)
      if (!m.at(r, col).is_zero()) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    if (pr != row) {
      for (int j = 0; j < ncols; ++j) std::swap(m.at(pr, j), m.at(row, j));
      std::swap(rhs[pr], rhs[row]);
    }
    Rational inv = m.at(row, col).inv();
    for (int j = col; j < ncols; ++j) m.at(row, j) *= inv;
    rhs[row] *= inv;
    for (int r = 0; r < nrows; ++r) {
      if (r == row || m.at(r, col).is_zero()) continue;
      Rational f = m.at(r, col);
      for (int j = col; j < ncols; ++j) m.at(r, j) -= f * m.at(row, j);
      rhs[r] -= f * rhs[row];
    }
    pivot_col[row] = col;
    ++row;
  }
  for (int r = row; r < nrows; ++r)
    if (!rhs[r].is_zero()) return std::nullopt;

  std::vector<bool> is_pivot(ncols, false);
  for (int r = 0; r < row; ++r) is_pivot[pivot_col[r]] = true;

  VecQ x(ncols);
  for (int col = 0; col < ncols; ++col)
    if (!is_pivot[col]) x[col] = free_value(col);
  for (int r = 0; r < row; ++r) {
    Rational v = rhs[r];
    for (int col = pivot_col[r] + 1; col < ncols; ++col)
      if (!is_pivot[col] && !m.at(r, col).is_zero()) v -= m.at(r, col) * x[col];
    x[pivot_col[r]] = v;
  }
  return x;
}

Rational poly_eval(const PolyQ& p, const Rational& x) {
  Rational r;
  for (size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return r;
}

PolyQ poly_mul(const PolyQ& p, const PolyQ& q) {
  if (p.empty() || q.empty()) return {};
  PolyQ r(p.size() + q.size() - 1);
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i].is_zero()) continue;
    for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  }
  return r;
}

PolyQ poly_add(const PolyQ& p, const PolyQ& q) {
  PolyQ r(std::max(p.size(), q.size()));
  for (size_t i = 0; i < p.size(); ++i) r[i] += p[i];
  for (size_t i = 0; i < q.size(); ++i) r[i] += q[i];
  return r;
}

void poly_trim(PolyQ& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

PolyQ poly_interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  // Newton form with exact divided differences.
  size_t n = xs.size();
  if (n == 0 || ys.size() != n) throw std::invalid_argument("poly_interpolate: bad input");
  std::vector<Rational> dd = ys;
  for (size_t level = 1; level < n; ++level)
    for (size_t i = n - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
  PolyQ result{dd[n - 1]};
  for (size_t i = n - 1; i-- > 0;) {
    PolyQ factor{-xs[i], Rational(1)};
    result = poly_mul(result, factor);
    result = poly_add(result, PolyQ{dd[i]});
  }
  poly_trim(result);
  return result;
}

}  // namespace rkstab
