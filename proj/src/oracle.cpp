#include "wds/oracle.hpp"

#include <optional>
#include <random>
#include <thread>

namespace wds {

Integer grid_size(unsigned n, unsigned N) { return binomial(N + n - 1, n - 1); }

namespace {

struct Partial {
  std::optional<Integer> best;  // numerator over N^d
  std::vector<unsigned> where;
};

// Scans all compositions whose last coordinate lies in [last_lo, last_hi].
Partial scan(const Form& f, unsigned N, unsigned last_lo, unsigned last_hi,
             const std::vector<std::vector<Integer>>& pw) {
  const unsigned n = f.variables();
  Partial out;
  std::vector<unsigned> k(n, 0);
  // k[i] for i >= 1 are free (colex: k[n-1] outermost); k[0] takes the rest.
  auto visit = [&]() {
    Integer value = 0;
    for (const auto& [e, c] : f.terms()) {
      Integer t = c;
      for (unsigned i = 0; i < n; ++i)
        if (e[i] != 0) t *= pw[k[i]][e[i]];
      value += t;
    }
    if (!out.best || value < *out.best) {
      out.best = value;
      out.where = k;
    }
  };
  if (n == 1) {
    k[0] = N;
    visit();
    return out;
  }
  auto rec = [&](auto&& self, unsigned i, unsigned rest) -> void {
    if (i == 0) {
      k[0] = rest;
      visit();
      return;
    }
    unsigned lo = 0, hi = rest;
    if (i == n - 1) {
      lo = last_lo;
      hi = std::min(last_hi, rest);
    }
    for (unsigned v = lo; v <= hi; ++v) {
      k[i] = v;
      self(self, i - 1, rest - v);
    }
    k[i] = 0;
  };
  if (last_lo <= std::min(last_hi, N)) rec(rec, n - 1, N);
  return out;
}

}  // namespace

GridMinimum grid_min(const Form& f, unsigned N, unsigned workers, std::uint64_t budget) {
  if (N == 0) throw InputError("grid denominator must be positive");
  Integer size = grid_size(f.variables(), N);
  if (size > budget)
    throw BudgetExceeded("grid has " + size.get_str() + " points (budget " + std::to_string(budget) + ")",
                         size);
  const unsigned d = f.degree();
  std::vector<std::vector<Integer>> pw(N + 1, std::vector<Integer>(d + 1));
  for (unsigned v = 0; v <= N; ++v) {
    pw[v][0] = 1;
    for (unsigned a = 1; a <= d; ++a) pw[v][a] = pw[v][a - 1] * v;
  }

  std::vector<Partial> parts;
  unsigned chunks = (workers > 1 && f.variables() > 1) ? std::min(workers, N + 1) : 1;
  if (chunks == 1) {
    parts.push_back(scan(f, N, 0, N, pw));
  } else {
    parts.resize(chunks);
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < chunks; ++w) {
      unsigned lo = w * (N + 1) / chunks, hi = (w + 1) * (N + 1) / chunks - 1;
      pool.emplace_back([&, w, lo, hi] { parts[w] = scan(f, N, lo, hi, pw); });
    }
  }
  // Chunks are in colex order, so the first strict improvement keeps the tie rule.
  const Partial* best = nullptr;
  for (const auto& p : parts)
    if (p.best && (!best || *p.best < *best->best)) best = &p;

  std::vector<Rational> coords;
  for (unsigned v : best->where) coords.emplace_back(Integer(v), Integer(N));
  for (auto& c : coords) c.canonicalize();
  Rational value(*best->best, pow(Integer(N), d));
  value.canonicalize();
  return {value, SimplexPoint(std::move(coords))};
}

ProbeResult random_probe(const Form& f, unsigned trials, std::uint64_t seed) {
  if (trials == 0) throw InputError("random_probe needs at least one trial");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> weight(0, 100);
  const unsigned n = f.variables();
  std::optional<ProbeResult> best;
  for (unsigned t = 0; t < trials; ++t) {
    std::vector<unsigned> w(n);
    unsigned total = 0;
    while (total == 0) {
      total = 0;
      for (auto& x : w) total += (x = weight(rng));
    }
    std::vector<Rational> coords;
    for (unsigned x : w) {
      Rational q(x, total);
      q.canonicalize();
      coords.push_back(q);
    }
    SimplexPoint p(std::move(coords));
    Rational v = evaluate(f, p);
    if (!best || v < best->value) best = ProbeResult{v, p};
  }
  return *best;
}

}  // namespace wds
