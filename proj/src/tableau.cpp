#include "rkstab/tableau.hpp"

#include <map>
#include <sstream>

namespace rkstab {

bool ButcherTableau::is_explicit() const {
  for (int i = 0; i < s; ++i)
    for (int j = i; j < s; ++j)
      if (!A.at(i, j).is_zero()) return false;
  return true;
}

bool ButcherTableau::row_sums_hold() const {
  for (int i = 0; i < s; ++i) {
    Rational sum;
    for (int j = 0; j < s; ++j) sum += A.at(i, j);
    if (sum != c[i]) return false;
  }
  return true;
}

Rational ButcherTableau::weight_sum() const {
  Rational sum;
  for (const auto& bi : b) sum += bi;
  return sum;
}

ValidationReport validate(const ButcherTableau& tab) {
  ValidationReport rep;
  rep.weight_sum = tab.weight_sum();
  rep.consistent = rep.weight_sum == Rational(1);
  rep.row_sums_hold = true;
  for (int i = 0; i < tab.s; ++i) {
    Rational sum;
    for (int j = 0; j < tab.s; ++j) sum += tab.A.at(i, j);
    if (sum != tab.c[i]) {
      rep.row_sums_hold = false;
      rep.row_sum_violations.push_back(i);
    }
  }
  rep.explicit_structure = tab.is_explicit();
  return rep;
}

NodeReport node_report(const ButcherTableau& tab) {
  NodeReport rep;
  int s = tab.s;
  for (int i = 0; i < s; ++i) {
    bool unique = true;
    for (int j = 0; j < s; ++j)
      if (j != i && tab.c[j] == tab.c[i]) {
        unique = false;
        break;
      }
    if (unique) rep.unique_nodes.push_back(i);
    if (!tab.b[i].is_zero()) {
      rep.quadrature_nodes.push_back(i);
      if (unique) rep.unique_quadrature_nodes.push_back(i);
      bool shift_free = true;
      for (int j = 0; j < s; ++j)
        if (j != i && (tab.c[j] - tab.c[i]).is_integer()) {
          shift_free = false;
          break;
        }
      if (shift_free) rep.integer_shift_free_quadrature_nodes.push_back(i);
    }
  }
  rep.is_confluent = static_cast<int>(rep.unique_nodes.size()) != s;
  return rep;
}

namespace {

std::string strip_comments(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool in_comment = false;
  for (char ch : text) {
    if (ch == '\n') in_comment = false;
    else if (ch == '#') in_comment = true;
    if (!in_comment) out.push_back(ch);
  }
  return out;
}

bool is_key(const std::string& tok) {
  return tok == "name" || tok == "s" || tok == "A" || tok == "b" || tok == "c";
}

}  // namespace

ButcherTableau parse_tableau(const std::string& text) {
  std::istringstream in(strip_comments(text));
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);

  ButcherTableau tab;
  std::map<std::string, bool> seen;
  size_t pos = 0;
  auto take = [&](const std::string& what) -> std::string {
    if (pos >= tokens.size())
      throw TableauParseError("unexpected end of input while reading " + what);
    return tokens[pos++];
  };
  auto take_rational = [&](const std::string& what) -> Rational {
    std::string tok = take(what);
    if (is_key(tok))
      throw TableauParseError("too few entries for " + what + " (found key '" + tok + "')");
    try {
      return Rational::from_string(tok);
    } catch (const std::invalid_argument& e) {
      throw TableauParseError(std::string(e.what()) + " while reading " + what);
    }
  };

  while (pos < tokens.size()) {
    std::string key = take("key");
    if (!is_key(key)) throw TableauParseError("unknown field '" + key + "'");
    if (seen[key]) throw TableauParseError("duplicate field '" + key + "'");
    seen[key] = true;
    if (key == "name") {
      tab.name = take("name value");
    } else if (key == "s") {
      Rational v = take_rational("s");
      if (!v.is_integer() || v.sign() <= 0)
        throw TableauParseError("s must be a positive integer");
      tab.s = static_cast<int>(v.num().get_si());
      if (tab.s > 64) throw TableauParseError("s too large");
    } else {
      if (tab.s == 0) throw TableauParseError("field 's' must precede '" + key + "'");
      if (key == "A") {
        tab.A = MatQ(tab.s, tab.s);
        for (int i = 0; i < tab.s; ++i)
          for (int j = 0; j < tab.s; ++j) tab.A.at(i, j) = take_rational("A");
      } else {
        VecQ& v = key == "b" ? tab.b : tab.c;
        v.resize(tab.s);
        for (int i = 0; i < tab.s; ++i) v[i] = take_rational(key);
      }
    }
  }
  for (const char* field : {"s", "A", "b", "c"})
    if (!seen[field]) throw TableauParseError(std::string("missing field '") + field + "'");
  if (tab.name.empty()) tab.name = "unnamed";
  return tab;
}

std::string serialize_tableau(const ButcherTableau& tab) {
  std::ostringstream out;
  out << "name " << tab.name << "\n";
  out << "s " << tab.s << "\n";
  out << "A\n";
  for (int i = 0; i < tab.s; ++i) {
    for (int j = 0; j < tab.s; ++j) out << (j ? " " : "") << tab.A.at(i, j);
    out << "\n";
  }
  out << "b";
  for (const auto& v : tab.b) out << " " << v;
  out << "\nc";
  for (const auto& v : tab.c) out << " " << v;
  out << "\n";
  return out.str();
}

}  // namespace rkstab
