#include "support.hpp"
#include "wds/oracle.hpp"

#include <doctest.h>

using namespace wds;
using namespace wds::testing;

namespace {

Rational q(long p, long r = 1) {
  Rational x(p, r);
  x.canonicalize();
  return x;
}

// Plain nested enumeration over every grid point of the 2- or 3-simplex.
Rational brute_min(const Form& f, unsigned N) {
  std::optional<Rational> best;
  const unsigned n = f.variables();
  for (unsigned a = 0; a <= N; ++a)
    for (unsigned b = 0; b + a <= N; ++b) {
      if (n == 2 && a + b != N) continue;
      std::vector<Rational> p{q(a, N), q(b, N)};
      if (n == 3) p.push_back(q(N - a - b, N));
      Rational v = ref_evaluate(f, p);
      if (!best || v < *best) best = v;
    }
  return *best;
}

}  // namespace

TEST_CASE("grid examples") {
  GridMinimum a = grid_min(parse_form("x1^2+x2^2"), 2);
  CHECK(a.value == q(1, 2));
  CHECK(a.argmin == SimplexPoint({q(1, 2), q(1, 2)}));
  for (unsigned N : {1u, 3u, 7u}) {
    GridMinimum b = grid_min(parse_form("x1^3+3*x1^2*x2+3*x1*x2^2+x2^3"), N);
    CHECK(b.value == 1);
    CHECK(b.argmin == SimplexPoint({q(1), q(0)}));
  }
  GridMinimum c = grid_min(parse_form("x1^2-3*x1*x2+x2^2"), 2);
  CHECK(c.value == q(-1, 4));
  CHECK(c.argmin == SimplexPoint({q(1, 2), q(1, 2)}));
}

TEST_CASE("grid size and budget") {
  CHECK(grid_size(3, 4) == 15);
  CHECK_THROWS_AS(grid_min(parse_form("x1*x2*x3*x4*x5"), 200, 0, 1000), BudgetExceeded);
}

TEST_CASE("grid minimum matches brute force and is partition independent") {
  Rng rng(53);
  for (int i = 0; i < 40; ++i) {
    unsigned n = static_cast<unsigned>(uniform(rng, 2, 3));
    Form f = random_form(rng, n, static_cast<unsigned>(uniform(rng, 1, 4)), 9);
    unsigned N = static_cast<unsigned>(uniform(rng, 1, 20));
    GridMinimum g = grid_min(f, N);
    CHECK(g.value == brute_min(f, N));
    CHECK(evaluate(f, g.argmin) == g.value);
    GridMinimum p = grid_min(f, N, 4);
    CHECK(p.value == g.value);
    CHECK(p.argmin == g.argmin);
  }
}

TEST_CASE("random probe") {
  Rng rng(59);
  Form pos = random_positive_complete(rng, 3, 3, 9);
  CHECK(random_probe(pos, 200, 1).value > 0);
  ProbeResult r = random_probe(parse_form("x1-x2"), 200, 2);
  CHECK(r.value < 0);
  CHECK(evaluate(parse_form("x1-x2"), r.point) == r.value);
  ProbeResult a = random_probe(pos, 50, 9), b = random_probe(pos, 50, 9);
  CHECK(a.value == b.value);
  CHECK(a.point == b.point);
}
