#include "wds/rational.hpp"

#include <cmath>
#include <cstdio>

namespace wds {

std::string to_fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer parse_integer(std::string_view text) {
  std::string s(text);
  std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (start == s.size()) throw InputError("empty integer '" + s + "'");
  for (std::size_t i = start; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') throw InputError("invalid integer '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  return Integer(s, 10);
}

Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view v) {
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
    return v;
  };
  text = trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  Integer num = parse_integer(trim(text.substr(0, slash)));
  Integer den = parse_integer(trim(text.substr(slash + 1)));
  if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string approx_string(const Rational& q, int digits) {
  if (q == 0) return "0";
  // mpf keeps a wide exponent range, so tiny bounds do not underflow.
  mpf_class f(q, 128);
  mp_exp_t exp = 0;
  std::string mant = f.get_str(exp, 10, static_cast<std::size_t>(digits));
  bool neg = !mant.empty() && mant[0] == '-';
  if (neg) mant.erase(0, 1);
  std::string out = neg ? "-" : "";
  long e10 = static_cast<long>(exp) - 1;
  if (e10 >= -4 && e10 < digits) {
    long point = static_cast<long>(exp);
    long len = static_cast<long>(mant.size());
    if (point <= 0) return out + "0." + std::string(static_cast<std::size_t>(-point), '0') + mant;
    if (point >= len) return out + mant + std::string(static_cast<std::size_t>(point - len), '0');
    return out + mant.substr(0, point) + "." + mant.substr(point);
  }
  out += mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  out += "e" + std::to_string(e10);
  return out;
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Integer lcm_upto(unsigned n) {
  Integer l = 1;
  for (unsigned j = 2; j <= n; ++j) mpz_lcm_ui(l.get_mpz_t(), l.get_mpz_t(), j);
  return l;
}

Integer pow(const Integer& x, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), e);
  return r;
}

Rational pow(const Rational& x, unsigned long e) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), e);
  return r;
}

}  // namespace wds
