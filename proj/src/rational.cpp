#include "rkstab/rational.hpp"

#include <cctype>
#include <ostream>

namespace rkstab {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s))
    throw std::invalid_argument("malformed rational literal: '" + std::string(s) + "'");
  mpz_class v(std::string(s), 10);
  return neg ? mpz_class(-v) : v;
}

}  // namespace

Rational Rational::from_string(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s), mpz_class(1));
  mpz_class num = parse_integer(s.substr(0, slash));
  std::string_view den_part = s.substr(slash + 1);
  if (!all_digits(den_part))
    throw std::invalid_argument("malformed rational literal: '" + std::string(s) + "'");
  mpz_class den(std::string(den_part), 10);
  if (den == 0) throw std::invalid_argument("malformed rational literal: zero denominator");
  return Rational(num, den);
}

Rational Rational::pow(unsigned long e) const {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), num().get_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), den().get_mpz_t(), e);
  return Rational(n, d);
}

std::string Rational::to_string() const {
  if (is_integer()) return num().get_str();
  return num().get_str() + "/" + den().get_str();
}

namespace {

// mpz -> long double keeping ~106 bits: leading double plus residual double.
long double mpz_to_long_double(const mpz_class& z) {
  double hi = z.get_d();
  mpz_class rest = z - mpz_class(hi);
  return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

}  // namespace

long double Rational::to_long_double() const {
  return mpz_to_long_double(num()) / mpz_to_long_double(den());
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace rkstab
