#include "noncollide/exact.hpp"

#include <cctype>
#include <cmath>

#include "noncollide/error.hpp"

namespace noncollide {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto bad = [&]() -> Rational { throw Error(ErrorKind::InvalidArgument, "exact", "not a rational number: '" + text + "'"); };
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  Rational r;
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return bad();
    BigInt d(den, 10);
    if (d == 0) return bad();
    r = Rational(BigInt(num, 10), d);
  } else if (const auto dot = s.find('.'); dot != std::string::npos) {
    const std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) return bad();
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    r = Rational(BigInt((whole.empty() ? "0" : whole) + frac, 10), den);
  } else {
    if (!all_digits(s)) return bad();
    r = Rational(BigInt(s, 10));
  }
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

double ratio_to_double(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "exact", "zero denominator");
  if (num == 0) return 0.0;
  long en = 0, ed = 0;
  const double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
  const double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
  return std::ldexp(mn / md, static_cast<int>(en - ed));
}

}  // namespace noncollide
