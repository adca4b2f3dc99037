#pragma once

#include <string>
#include <vector>

#include "rkstab/linalg.hpp"

namespace rkstab {

// Runge-Kutta coefficients (A, b, c) with exact rational entries.
// Stage indices are 0-based throughout the API; reports print them 1-based.
struct ButcherTableau {
  std::string name;
  int s = 0;
  MatQ A;
  VecQ b;
  VecQ c;

  bool is_explicit() const;
  // c_i == sum_j a_ij for every stage.
  bool row_sums_hold() const;
  Rational weight_sum() const;
};

struct ValidationReport {
  bool consistent = false;           // sum b_i == 1
  Rational weight_sum;
  bool row_sums_hold = false;        // c_i == sum_j a_ij
  std::vector<int> row_sum_violations;
  bool explicit_structure = false;   // a_ij == 0 for j >= i
};

ValidationReport validate(const ButcherTableau& tab);

struct NodeReport {
  std::vector<int> unique_nodes;             // c_i equal to no other c_j
  std::vector<int> quadrature_nodes;         // b_i != 0
  std::vector<int> unique_quadrature_nodes;  // intersection
  // quadrature k such that c_j - c_k is a non-integer for every j != k
  std::vector<int> integer_shift_free_quadrature_nodes;
  bool is_confluent = false;
};

NodeReport node_report(const ButcherTableau& tab);

// Tableau file parsing. Flat key-value text: `name`, `s`, `A` (s rows of s
// rationals), `b`, `c`. `#` starts a comment. Exact fractions only.
struct TableauParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ButcherTableau parse_tableau(const std::string& text);
std::string serialize_tableau(const ButcherTableau& tab);

}  // namespace rkstab
