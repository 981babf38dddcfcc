#include "srcurv/scalar.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

#include "srcurv/errors.hpp"

namespace srcurv {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

bool is_rational_literal(std::string_view raw) {
  std::string s = trim(raw);
  auto slash = s.find('/');
  if (slash == std::string::npos) return is_integer_literal(s);
  std::string_view num(s.data(), slash);
  std::string_view den(s.data() + slash + 1, s.size() - slash - 1);
  return is_integer_literal(num) && is_integer_literal(den) && den.front() != '-' &&
         den.front() != '+';
}

std::optional<Rational> ScalarOps<Rational>::sqrt(const Rational& x) {
  if (x < 0) return std::nullopt;
  if (x == 0) return Rational(0);
  using boost::multiprecision::mpz_int;
  mpz_int num = numerator(x);
  mpz_int den = denominator(x);
  mpz_int rn = boost::multiprecision::sqrt(num);
  mpz_int rd = boost::multiprecision::sqrt(den);
  if (rn * rn != num || rd * rd != den) return std::nullopt;
  return Rational(rn, rd);
}

std::string ScalarOps<Rational>::format(const Rational& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

Rational ScalarOps<Rational>::parse(std::string_view raw) {
  std::string s = trim(raw);
  if (!is_rational_literal(s)) throw InputError("not an exact rational literal: '" + s + "'");
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string den = s.substr(slash + 1);
    if (den.find_first_not_of('0') == std::string::npos)
      throw InputError("zero denominator in '" + s + "'");
    // mpq reads "p/q" but does not canonicalize; the Rational(p, q) path does.
    boost::multiprecision::mpz_int p(s.substr(0, slash));
    boost::multiprecision::mpz_int q(den);
    return Rational(p, q);
  }
  return Rational(boost::multiprecision::mpz_int(s));
}

std::string ScalarOps<double>::format(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double ScalarOps<double>::parse(std::string_view raw) {
  std::string s = trim(raw);
  if (s.empty()) throw InputError("empty numeric literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    if (!is_rational_literal(s)) throw InputError("bad fraction literal: '" + s + "'");
    return ScalarOps<Rational>::parse(s).convert_to<double>();
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("bad numeric literal: '" + s + "'");
  }
  if (used != s.size()) throw InputError("bad numeric literal: '" + s + "'");
  if (!std::isfinite(v)) throw InputError("non-finite numeric literal: '" + s + "'");
  return v;
}

}  // namespace srcurv
