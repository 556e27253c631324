#include "wds/bounds.hpp"

#include <mpfr.h>

#include <algorithm>

namespace wds {

namespace {

class Mpfr {
public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

private:
  mpfr_t v_;
};

Integer ipow(unsigned long base, unsigned long e) { return pow(Integer(base), e); }

void require_inputs(const Integer& M, unsigned long n, unsigned long d, unsigned long min_n) {
  if (M < 1) throw InputError("M must be at least 1");
  if (n < min_n) throw InputError("n must be at least " + std::to_string(min_n));
  if (d < 1) throw InputError("d must be at least 1");
}

// Bounds on ln x for a factored x, rounded outward.
void log_bounds(const FactoredInteger& x, mpfr_ptr lo, mpfr_ptr hi) {
  mpfr_prec_t prec = mpfr_get_prec(lo);
  Mpfr t(prec), e(prec);
  mpfr_set_zero(lo, 1);
  mpfr_set_zero(hi, 1);
  for (const auto& [base, exponent] : x) {
    if (base == 1 || exponent == 0) continue;
    mpfr_set_z(t.get(), base.get_mpz_t(), MPFR_RNDD);
    mpfr_log(t.get(), t.get(), MPFR_RNDD);
    mpfr_set_z(e.get(), exponent.get_mpz_t(), MPFR_RNDD);
    mpfr_mul(t.get(), t.get(), e.get(), MPFR_RNDD);
    mpfr_add(lo, lo, t.get(), MPFR_RNDD);

    mpfr_set_z(t.get(), base.get_mpz_t(), MPFR_RNDU);
    mpfr_log(t.get(), t.get(), MPFR_RNDU);
    mpfr_set_z(e.get(), exponent.get_mpz_t(), MPFR_RNDU);
    mpfr_mul(t.get(), t.get(), e.get(), MPFR_RNDU);
    mpfr_add(hi, hi, t.get(), MPFR_RNDU);
  }
}

// floor(ln x / ln(n/(n-1))) bracketed from the given bounds on ln x.
std::pair<Integer, Integer> ratio_floors(mpfr_ptr ln_lo, mpfr_ptr ln_hi, unsigned long n) {
  mpfr_prec_t prec = mpfr_get_prec(ln_lo);
  Mpfr q_lo(prec), q_hi(prec), r_lo(prec), r_hi(prec);
  mpfr_set_ui(q_lo.get(), n, MPFR_RNDD);
  mpfr_div_ui(q_lo.get(), q_lo.get(), n - 1, MPFR_RNDD);
  mpfr_log(q_lo.get(), q_lo.get(), MPFR_RNDD);
  mpfr_set_ui(q_hi.get(), n, MPFR_RNDU);
  mpfr_div_ui(q_hi.get(), q_hi.get(), n - 1, MPFR_RNDU);
  mpfr_log(q_hi.get(), q_hi.get(), MPFR_RNDU);
  mpfr_div(r_lo.get(), ln_lo, q_hi.get(), MPFR_RNDD);
  mpfr_div(r_hi.get(), ln_hi, q_lo.get(), MPFR_RNDU);
  Integer f_lo, f_hi;
  mpfr_get_z(f_lo.get_mpz_t(), r_lo.get(), MPFR_RNDD);
  mpfr_get_z(f_hi.get_mpz_t(), r_hi.get(), MPFR_RNDD);
  if (f_lo < 0) f_lo = 0;
  if (f_hi < 0) f_hi = 0;
  return {f_lo, f_hi};
}

// (n/(n-1))^m <= num/den
bool ratio_power_le(const Integer& num, const Integer& den, unsigned long n, unsigned long m) {
  return ipow(n, m) * den <= num * ipow(n - 1, m);
}

unsigned long to_ulong(const Integer& v, const char* what) {
  if (v < 0 || !v.fits_ulong_p()) throw BudgetExceeded(std::string(what) + " out of range", v);
  return v.get_ui();
}

}  // namespace

Integer estimated_digits(const FactoredInteger& x) {
  Mpfr lo(96), hi(96), ln10(96);
  log_bounds(x, lo.get(), hi.get());
  mpfr_set_ui(ln10.get(), 10, MPFR_RNDD);
  mpfr_log(ln10.get(), ln10.get(), MPFR_RNDD);
  mpfr_div(hi.get(), hi.get(), ln10.get(), MPFR_RNDU);
  Integer digits;
  mpfr_get_z(digits.get_mpz_t(), hi.get(), MPFR_RNDU);
  return digits + 1;
}

Integer materialize(const FactoredInteger& x, unsigned long digit_budget) {
  Integer digits = estimated_digits(x);
  if (digits > digit_budget)
    throw BudgetExceeded("integer needs about " + digits.get_str() + " decimal digits (budget " +
                             std::to_string(digit_budget) + ")",
                         digits);
  Integer out = 1;
  for (const auto& [base, exponent] : x) {
    if (base == 1) continue;
    out *= pow(base, to_ulong(exponent, "exponent"));
  }
  return out;
}

FactoredInteger c1_denominator(const Integer& M, unsigned long n, unsigned long d) {
  require_inputs(M, n, d, 1);
  Integer dn = ipow(d, n), dn1 = ipow(d, n + 1);
  return {{2 * M, dn}, {Integer(n), dn1 + d}, {Integer(d), Integer(n) * dn}};
}

FactoredInteger jp_denominator(const Integer& M, unsigned long n, unsigned long d) {
  require_inputs(M, n, d, 1);
  Integer dn1 = ipow(d, n + 1);
  return {{2 * M, dn1}, {Integer(d), Integer(n + 1) * dn1}};
}

FactoredInteger cp_argument(const Integer& M, unsigned long n, unsigned long d) {
  require_inputs(M, n, d, 2);
  Integer dn = ipow(d, n), dn1 = ipow(d, n + 1);
  return {{Integer(2), dn},
          {M, dn + 1},
          {Integer(n), dn1 + d},
          {Integer(d), Integer(n + 1) * d + Integer(n) * dn},
          {Integer(d + 1), Integer(n - 1) * (n + 2)}};
}

FactoredInteger cnps_argument(const Integer& M, unsigned long n, unsigned long d) {
  FactoredInteger x = cp_argument(M, n, d);
  x.front().exponent += 1;
  return x;
}

Rational c1_lower_bound(const Integer& M, unsigned long n, unsigned long d, unsigned long digit_budget) {
  return Rational(1) / Rational(materialize(c1_denominator(M, n, d), digit_budget));
}

Rational jp_simplex_bound(const Integer& M, unsigned long n, unsigned long d, unsigned long digit_budget) {
  return Rational(1) / Rational(materialize(jp_denominator(M, n, d), digit_budget));
}

Integer floor_log_ratio_exact(const Rational& x, unsigned long n) {
  if (n < 2) throw InputError("floor_log_ratio needs n >= 2");
  if (x < 1) throw InputError("floor_log_ratio needs x >= 1");
  const Integer& num = x.get_num();
  const Integer& den = x.get_den();
  unsigned long hi = 1;
  while (ratio_power_le(num, den, n, hi)) {
    if (hi > (1ul << 62)) throw BudgetExceeded("logarithm too large for exact search", Integer(hi));
    hi *= 2;
  }
  unsigned long lo = hi / 2;  // holds (ratio_power_le(.., 0) is x >= 1)
  if (hi == 1) lo = 0;
  while (hi - lo > 1) {
    unsigned long mid = lo + (hi - lo) / 2;
    (ratio_power_le(num, den, n, mid) ? lo : hi) = mid;
  }
  return Integer(lo);
}

std::optional<Integer> floor_log_ratio_interval(const FactoredInteger& x, unsigned long n,
                                                unsigned long max_precision) {
  if (n < 2) throw InputError("floor_log_ratio needs n >= 2");
  for (unsigned long prec = 64; prec <= max_precision; prec *= 2) {
    Mpfr lo(static_cast<mpfr_prec_t>(prec)), hi(static_cast<mpfr_prec_t>(prec));
    log_bounds(x, lo.get(), hi.get());
    auto [f_lo, f_hi] = ratio_floors(lo.get(), hi.get(), n);
    if (f_lo == f_hi) return f_lo;
  }
  return std::nullopt;
}

Integer floor_log_ratio(const Rational& x, unsigned long n) {
  if (n < 2) throw InputError("floor_log_ratio needs n >= 2");
  if (x < 1) throw InputError("floor_log_ratio needs x >= 1");
  // Bracket with a 128-bit interval, then settle the candidates exactly.
  Mpfr lo(128), hi(128);
  mpfr_set_q(lo.get(), x.get_mpq_t(), MPFR_RNDD);
  mpfr_log(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_set_q(hi.get(), x.get_mpq_t(), MPFR_RNDU);
  mpfr_log(hi.get(), hi.get(), MPFR_RNDU);
  auto [f_lo, f_hi] = ratio_floors(lo.get(), hi.get(), n);
  if (f_hi - f_lo <= 4 && f_hi.fits_ulong_p()) {
    for (unsigned long m = f_hi.get_ui() + 1; m-- > f_lo.get_ui();) {
      if (ratio_power_le(x.get_num(), x.get_den(), n, m)) {
        if (!ratio_power_le(x.get_num(), x.get_den(), n, m + 1)) return Integer(m);
        break;
      }
    }
  }
  return floor_log_ratio_exact(x, n);
}

LogFloor floor_log_ratio(const FactoredInteger& x, unsigned long n, unsigned long digit_budget) {
  if (n < 2) throw InputError("floor_log_ratio needs n >= 2");
  if (auto v = floor_log_ratio_interval(x, n)) return {*v, true, "interval"};
  try {
    return {floor_log_ratio(Rational(materialize(x, digit_budget)), n), true, "exact"};
  } catch (const BudgetExceeded&) {
    // Too large to settle: report the upper end, which keeps the step bound sound.
    Mpfr lo(1u << 16), hi(1u << 16);
    log_bounds(x, lo.get(), hi.get());
    return {ratio_floors(lo.get(), hi.get(), n).second, false, "approximate"};
  }
}

Integer cp_steps(const Integer& M, unsigned long n, unsigned long d, unsigned long digit_budget) {
  LogFloor f = floor_log_ratio(cp_argument(M, n, d), n, digit_budget);
  if (!f.certified) throw BudgetExceeded("C_p could not be certified within the digit budget", f.value + 2);
  return f.value + 2;
}

Integer cnps_steps(const Integer& M, unsigned long n, unsigned long d, unsigned long digit_budget) {
  LogFloor f = floor_log_ratio(cnps_argument(M, n, d), n, digit_budget);
  if (!f.certified)
    throw BudgetExceeded("C_nps could not be certified within the digit budget", f.value + 2);
  return f.value + 2;
}

std::string reciprocal_approx(const FactoredInteger& x, int digits) {
  Mpfr lo(160), hi(160), ln10(160), neg(160), frac(160), mant(160);
  log_bounds(x, lo.get(), hi.get());
  mpfr_set_ui(ln10.get(), 10, MPFR_RNDN);
  mpfr_log(ln10.get(), ln10.get(), MPFR_RNDN);
  // -log10 X = e + frac with 0 <= frac < 1, value = 10^frac * 10^e
  mpfr_div(neg.get(), lo.get(), ln10.get(), MPFR_RNDN);
  mpfr_neg(neg.get(), neg.get(), MPFR_RNDN);
  Integer e;
  mpfr_get_z(e.get_mpz_t(), neg.get(), MPFR_RNDD);
  mpfr_sub_z(frac.get(), neg.get(), e.get_mpz_t(), MPFR_RNDN);
  mpfr_exp10(mant.get(), frac.get(), MPFR_RNDN);
  std::string fmt = "%." + std::to_string(std::max(0, digits - 1)) + "Rf";
  char buf[128];
  mpfr_snprintf(buf, sizeof buf, fmt.c_str(), mant.get());
  std::string m = buf;
  if (m.rfind("10", 0) == 0) {  // rounding carried 9.99.. up to 10
    e += 1;
    mpfr_div_ui(mant.get(), mant.get(), 10, MPFR_RNDN);
    mpfr_snprintf(buf, sizeof buf, fmt.c_str(), mant.get());
    m = buf;
  }
  return e == 0 ? m : m + "e" + e.get_str();
}

namespace {

ReciprocalBound reciprocal(FactoredInteger x, unsigned long digit_budget) {
  ReciprocalBound out;
  out.digits = estimated_digits(x);
  out.approx = reciprocal_approx(x);
  try {
    out.exact = Rational(1) / Rational(materialize(x, digit_budget));
  } catch (const BudgetExceeded&) {
  }
  out.denominator = std::move(x);
  return out;
}

StepBound steps(FactoredInteger x, unsigned long n, unsigned long digit_budget) {
  LogFloor f = floor_log_ratio(x, n, digit_budget);
  return {f.value + 2, f.certified, f.method, std::move(x)};
}

}  // namespace

BoundReport bound_report(const Integer& M, unsigned long n, unsigned long d, unsigned long digit_budget) {
  require_inputs(M, n, d, 2);
  BoundReport r;
  r.M = M;
  r.n = n;
  r.d = d;
  r.c1 = reciprocal(c1_denominator(M, n, d), digit_budget);
  r.jp_bound = reciprocal(jp_denominator(M, n, d), digit_budget);
  r.cp = steps(cp_argument(M, n, d), n, digit_budget);
  r.cnps = steps(cnps_argument(M, n, d), n, digit_budget);
  return r;
}

}  // namespace wds
