#pragma once

// Brute-force ground truth on rational grids of the simplex. Independent of
// the substitution machinery; used to cross-check verdicts.

#include "wds/form.hpp"

#include <cstdint>

namespace wds {

constexpr std::uint64_t kDefaultGridBudget = 5'000'000;

struct GridMinimum {
  Rational value;
  SimplexPoint argmin;
};

/// Number of grid points (k1/N, ..., kn/N), binomial(N+n-1, n-1).
Integer grid_size(unsigned n, unsigned N);

/// Exact minimum over all points with denominator N. Points are visited in
/// colex order starting at (1,0,...,0); the first minimizer wins ties.
/// `workers` > 1 splits the grid across threads with the same result.
GridMinimum grid_min(const Form& f, unsigned N, unsigned workers = 0,
                     std::uint64_t budget = kDefaultGridBudget);

struct ProbeResult {
  Rational value;
  SimplexPoint point;
};

/// Minimum over `trials` pseudorandom rational simplex points (weights in
/// 0..100, normalized). Deterministic for a given seed.
ProbeResult random_probe(const Form& f, unsigned trials, std::uint64_t seed);

}  // namespace wds
