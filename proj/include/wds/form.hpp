#pragma once

#include "wds/rational.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wds {

/// Exponent vector of a monomial x1^a1 ... xn^an.
using Exponents = std::vector<unsigned>;

unsigned total_degree(const Exponents& e);

/// Graded lexicographic order, largest first: x1^2 > x1*x2 > x2^2.
struct GradedLexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Homogeneous polynomial with nonzero integer coefficients.
///
/// A Form is never the zero polynomial and every stored exponent vector has
/// length n and entry sum d. Terms iterate in graded lexicographic order, so
/// emission, hashing and equality are deterministic.
class Form {
public:
  using Terms = std::map<Exponents, Integer, GradedLexGreater>;

  /// Drops zero coefficients, then validates. Throws InputError for the zero
  /// polynomial, a wrong exponent length, or mixed total degrees.
  Form(unsigned n, Terms terms);

  unsigned variables() const noexcept { return n_; }
  unsigned degree() const noexcept { return d_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }

  /// Zero for a missing monomial.
  Integer coefficient(const Exponents& e) const;

  /// Number of monomials of degree d in n variables, binomial(d+n-1, n-1).
  Integer monomial_count() const;

  friend bool operator==(const Form&, const Form&) = default;

private:
  unsigned n_;
  unsigned d_ = 0;
  Terms terms_;
};

/// Point of the standard simplex: nonnegative rationals summing to exactly one.
class SimplexPoint {
public:
  explicit SimplexPoint(std::vector<Rational> coords);

  const std::vector<Rational>& coords() const noexcept { return coords_; }
  std::size_t size() const noexcept { return coords_.size(); }

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;
  friend auto operator<=>(const SimplexPoint& a, const SimplexPoint& b) {
    return std::lexicographical_compare_three_way(a.coords_.begin(), a.coords_.end(),
                                                  b.coords_.begin(), b.coords_.end(),
                                                  [](const Rational& x, const Rational& y) {
                                                    int c = cmp(x, y);
                                                    return c < 0   ? std::strong_ordering::less
                                                           : c > 0 ? std::strong_ordering::greater
                                                                   : std::strong_ordering::equal;
                                                  });
  }

private:
  std::vector<Rational> coords_;
};

enum class SignCategory { AllPositiveComplete, AllNonnegative, Mixed, AllNegativeComplete };

std::string_view to_string(SignCategory c);

struct SignSummary {
  SignCategory category;
  /// 0-based indices i whose x_i^d coefficient is negative.
  std::vector<unsigned> negative_axis_powers;
  /// 0-based indices i whose x_i^d monomial is absent.
  std::vector<unsigned> zero_axis_powers;
};

/// Parses the text grammar
///   expr := term (('+'|'-') term)* ; term := [integer] ('*'? var)* ;
///   var := 'x' index ('^' exponent)?
/// Variables are x1..xn; n is the largest index seen unless `n_override` is
/// given (it must cover every index used).
Form parse_form(std::string_view text, std::optional<unsigned> n_override = std::nullopt);

/// Inverse of parse_form; `var` names the variables (x1, y1, ...).
std::string emit(const Form& f, char var = 'x');

Integer coefficient_bound(const Form& f);

/// Exact value of f at an arbitrary rational point of length n.
Rational evaluate(const Form& f, std::span<const Rational> point);
inline Rational evaluate(const Form& f, const SimplexPoint& p) { return evaluate(f, p.coords()); }

SignSummary sign_summary(const Form& f);

/// Divides every coefficient by their (positive) gcd.
Form content_normalize(const Form& f);

/// Exponent vector d*e_i.
Exponents axis_power(unsigned n, unsigned d, unsigned i);

}  // namespace wds
