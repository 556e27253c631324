#pragma once

// Random generators and a reference implementation written from the
// definitions, used to cross-check the library.

#include "wds/form.hpp"
#include "wds/search.hpp"
#include "wds/substitution.hpp"

#include <map>
#include <random>
#include <span>
#include <vector>

namespace wds::testing {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi);

/// Every exponent vector of total degree d in n variables.
std::vector<Exponents> all_exponents(unsigned n, unsigned d);

/// Nonzero form with coefficients in [-coef_max, coef_max]; each monomial is
/// present with probability `density` (at least one always is).
Form random_form(Rng& rng, unsigned n, unsigned d, int coef_max, double density = 0.6);
/// Every monomial with a coefficient in [1, coef_max].
Form random_positive_complete(Rng& rng, unsigned n, unsigned d, int coef_max);
Form negate(const Form& f);

Permutation random_permutation(Rng& rng, unsigned n);
Path random_path(Rng& rng, unsigned n, unsigned depth);

/// Signed rational with |numerator| <= 20 and denominator in 1..20.
Rational random_rational(Rng& rng);
std::vector<Rational> random_vector(Rng& rng, unsigned n);
/// Nonnegative rationals summing to one.
std::vector<Rational> random_simplex_coords(Rng& rng, unsigned n);

using Matrix = std::vector<std::vector<Rational>>;
/// P_theta times T_n, with both factors spelled out entry by entry.
Matrix ref_wds_matrix(const Permutation& theta);
Matrix ref_multiply(const Matrix& a, const Matrix& b);
Matrix ref_path_matrix(unsigned n, const Path& path);
std::vector<Rational> ref_apply(const Matrix& m, std::span<const Rational> y);

using Poly = std::map<Exponents, Rational>;
/// f(m y), multiplied out one linear factor at a time.
Poly ref_substitute(const Form& f, const Matrix& m);
Rational ref_evaluate(const Poly& p, std::span<const Rational> y);
Rational ref_evaluate(const Form& f, std::span<const Rational> x);

}  // namespace wds::testing
