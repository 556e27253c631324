#pragma once

// Exact lower bounds on |min f| over the simplex and the WDS step counts that
// guarantee a decision, for integral forms with coefficients bounded by M.

#include "wds/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wds {

/// base^exponent, kept symbolic because the exponents grow like d^(n+1).
struct FactorPower {
  Integer base;
  Integer exponent;
};
using FactoredInteger = std::vector<FactorPower>;

constexpr unsigned long kDefaultDigitBudget = 10'000'000;

/// Decimal digits of the product, rounded up (an estimate good to +-1).
Integer estimated_digits(const FactoredInteger& x);

/// Multiplies the factors out. Throws BudgetExceeded (carrying the digit
/// count) when the result would be longer than `digit_budget` digits.
Integer materialize(const FactoredInteger& x, unsigned long digit_budget = kDefaultDigitBudget);

/// Denominator of C_1: (2M)^{d^n} n^{d^{n+1}+d} d^{n d^n}.
FactoredInteger c1_denominator(const Integer& M, unsigned long n, unsigned long d);
/// Denominator of the simplex bound: (2M)^{d^{n+1}} d^{(n+1) d^{n+1}}.
FactoredInteger jp_denominator(const Integer& M, unsigned long n, unsigned long d);
/// 2^{d^n} M^{d^n+1} n^{d^{n+1}+d} d^{(n+1)d+n d^n} (d+1)^{(n-1)(n+2)}.
FactoredInteger cp_argument(const Integer& M, unsigned long n, unsigned long d);
/// Twice cp_argument (the power of two gains one).
FactoredInteger cnps_argument(const Integer& M, unsigned long n, unsigned long d);

Rational c1_lower_bound(const Integer& M, unsigned long n, unsigned long d,
                        unsigned long digit_budget = kDefaultDigitBudget);
Rational jp_simplex_bound(const Integer& M, unsigned long n, unsigned long d,
                          unsigned long digit_budget = kDefaultDigitBudget);

/// Largest m >= 0 with (n/(n-1))^m <= x, by exact big-integer comparison only.
Integer floor_log_ratio_exact(const Rational& x, unsigned long n);

/// Same quantity from directed-rounding interval logarithms, doubling the
/// precision until the floor is unambiguous. nullopt when `max_precision`
/// bits do not settle it (x on or extremely near a power of n/(n-1)).
std::optional<Integer> floor_log_ratio_interval(const FactoredInteger& x, unsigned long n,
                                                unsigned long max_precision = 1u << 16);

/// Largest m >= 0 with (n/(n-1))^m <= x. Requires x >= 1 and n >= 2.
Integer floor_log_ratio(const Rational& x, unsigned long n);

struct LogFloor {
  Integer value;
  bool certified = true;
  std::string method;  // "interval", "exact" or "approximate"
};

/// Interval path first; exact comparison when the interval cannot decide and x
/// fits the digit budget; otherwise an uncertified upper estimate.
LogFloor floor_log_ratio(const FactoredInteger& x, unsigned long n,
                         unsigned long digit_budget = kDefaultDigitBudget);

Integer cp_steps(const Integer& M, unsigned long n, unsigned long d,
                 unsigned long digit_budget = kDefaultDigitBudget);
Integer cnps_steps(const Integer& M, unsigned long n, unsigned long d,
                   unsigned long digit_budget = kDefaultDigitBudget);

/// 1/X for a factored X: exact when within budget, always with a decimal
/// approximation.
struct ReciprocalBound {
  std::optional<Rational> exact;
  FactoredInteger denominator;
  Integer digits;
  std::string approx;
};

struct StepBound {
  Integer steps;
  bool certified = true;
  std::string method;
  FactoredInteger log_argument;
};

struct BoundReport {
  Integer M;
  unsigned long n = 0;
  unsigned long d = 0;
  ReciprocalBound c1;
  ReciprocalBound jp_bound;
  StepBound cp;
  StepBound cnps;
  std::string bracket = "floor";
};

/// Requires M >= 1, n >= 2, d >= 1. Never throws BudgetExceeded: oversized
/// quantities are reported symbolically.
BoundReport bound_report(const Integer& M, unsigned long n, unsigned long d,
                         unsigned long digit_budget = kDefaultDigitBudget);

/// Scientific notation of 1/X, from the factored form.
std::string reciprocal_approx(const FactoredInteger& x, int digits = 7);

}  // namespace wds
