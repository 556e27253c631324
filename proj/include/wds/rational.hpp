#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wds {

using Integer = mpz_class;
using Rational = mpq_class;

/// Input that cannot be turned into a well-formed object (bad syntax,
/// non-homogeneous polynomial, malformed JSON document, ...).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Syntax error carrying the byte offset where parsing stopped.
class ParseError : public InputError {
public:
  ParseError(const std::string& what, std::size_t position)
      : InputError(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// A configured size limit (digit budget, node budget, grid budget) would be exceeded.
class BudgetExceeded : public std::runtime_error {
public:
  BudgetExceeded(const std::string& what, Integer required)
      : std::runtime_error(what), required_(std::move(required)) {}
  const Integer& required() const noexcept { return required_; }

private:
  Integer required_;
};

// Rationals are exchanged as "p/q"; integers as plain decimal strings.
std::string to_fraction_string(const Rational& q);
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

/// Short scientific-notation approximation, for human-readable output only.
std::string approx_string(const Rational& q, int digits = 6);

Integer binomial(unsigned long n, unsigned long k);
Integer lcm_upto(unsigned n);

/// x^e for rational x and machine exponent.
Rational pow(const Rational& x, unsigned long e);
Integer pow(const Integer& x, unsigned long e);

}  // namespace wds
