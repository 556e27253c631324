#include "support.hpp"

namespace wds::testing {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<Exponents> all_exponents(unsigned n, unsigned d) {
  std::vector<Exponents> out;
  Exponents e(n, 0);
  auto rec = [&](auto& self, unsigned i, unsigned left) -> void {
    if (i + 1 == n) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[i] = k;
      self(self, i + 1, left - k);
    }
  };
  rec(rec, 0, d);
  return out;
}

Form random_form(Rng& rng, unsigned n, unsigned d, int coef_max, double density) {
  auto exps = all_exponents(n, d);
  std::bernoulli_distribution keep(density);
  Form::Terms terms;
  for (const auto& e : exps) {
    if (!keep(rng)) continue;
    int c = uniform(rng, -coef_max, coef_max);
    if (c != 0) terms[e] = c;
  }
  if (terms.empty()) {
    int c = uniform(rng, 1, coef_max);
    terms[exps[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(exps.size()) - 1))]] =
        uniform(rng, 0, 1) ? c : -c;
  }
  return Form(n, std::move(terms));
}

Form random_positive_complete(Rng& rng, unsigned n, unsigned d, int coef_max) {
  Form::Terms terms;
  for (const auto& e : all_exponents(n, d)) terms[e] = uniform(rng, 1, coef_max);
  return Form(n, std::move(terms));
}

Form negate(const Form& f) {
  Form::Terms terms;
  for (const auto& [e, c] : f.terms()) terms[e] = -c;
  return Form(f.variables(), std::move(terms));
}

Permutation random_permutation(Rng& rng, unsigned n) {
  std::vector<unsigned> images(n);
  for (unsigned i = 0; i < n; ++i) images[i] = i + 1;
  std::shuffle(images.begin(), images.end(), rng);
  return Permutation(std::move(images));
}

Path random_path(Rng& rng, unsigned n, unsigned depth) {
  Path p;
  for (unsigned i = 0; i < depth; ++i) p.push_back(random_permutation(rng, n));
  return p;
}

Rational random_rational(Rng& rng) {
  Rational q(uniform(rng, -20, 20), uniform(rng, 1, 20));
  q.canonicalize();
  return q;
}

std::vector<Rational> random_vector(Rng& rng, unsigned n) {
  std::vector<Rational> v;
  for (unsigned i = 0; i < n; ++i) v.push_back(random_rational(rng));
  return v;
}

std::vector<Rational> random_simplex_coords(Rng& rng, unsigned n) {
  std::vector<int> w(n);
  int total = 0;
  while (total == 0) {
    total = 0;
    for (auto& x : w) total += (x = uniform(rng, 0, 30));
  }
  std::vector<Rational> v;
  for (int x : w) {
    Rational q(x, total);
    q.canonicalize();
    v.push_back(q);
  }
  return v;
}

Matrix ref_wds_matrix(const Permutation& theta) {
  const unsigned n = theta.size();
  Matrix p(n, std::vector<Rational>(n, 0)), t(n, std::vector<Rational>(n, 0));
  for (unsigned i = 1; i <= n; ++i) p[i - 1][theta[i] - 1] = 1;
  for (unsigned j = 1; j <= n; ++j)
    for (unsigned i = 1; i <= j; ++i) t[i - 1][j - 1] = Rational(1, j);
  return ref_multiply(p, t);
}

Matrix ref_multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Matrix c(n, std::vector<Rational>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < k; ++l) c[i][j] += a[i][l] * b[l][j];
  return c;
}

Matrix ref_path_matrix(unsigned n, const Path& path) {
  Matrix m(n, std::vector<Rational>(n, 0));
  for (unsigned i = 0; i < n; ++i) m[i][i] = 1;
  for (const auto& theta : path) m = ref_multiply(m, ref_wds_matrix(theta));
  return m;
}

std::vector<Rational> ref_apply(const Matrix& m, std::span<const Rational> y) {
  std::vector<Rational> x(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) x[i] += m[i][j] * y[j];
  return x;
}

namespace {

Poly multiply(const Poly& a, const Poly& b) {
  Poly c;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exponents e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      c[e] += ca * cb;
    }
  std::erase_if(c, [](const auto& kv) { return kv.second == 0; });
  return c;
}

}  // namespace

Poly ref_substitute(const Form& f, const Matrix& m) {
  const unsigned n = f.variables();
  std::vector<Poly> rows(n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j)
      if (m[i][j] != 0) {
        Exponents e(n, 0);
        e[j] = 1;
        rows[i][e] = m[i][j];
      }
  Poly out;
  for (const auto& [e, c] : f.terms()) {
    Poly term{{Exponents(n, 0), Rational(c)}};
    for (unsigned i = 0; i < n; ++i)
      for (unsigned k = 0; k < e[i]; ++k) term = multiply(term, rows[i]);
    for (const auto& [te, tc] : term) out[te] += tc;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

Rational ref_evaluate(const Poly& p, std::span<const Rational> y) {
  Rational total = 0;
  for (const auto& [e, c] : p) {
    Rational t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (unsigned k = 0; k < e[i]; ++k) t *= y[i];
    total += t;
  }
  return total;
}

Rational ref_evaluate(const Form& f, std::span<const Rational> x) {
  Poly p;
  for (const auto& [e, c] : f.terms()) p[e] = Rational(c);
  return ref_evaluate(p, x);
}

}  // namespace wds::testing
