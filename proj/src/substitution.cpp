#include "wds/substitution.hpp"

#include "wds/dense_form.hpp"

#include <algorithm>
#include <map>

namespace wds {

Permutation::Permutation(std::vector<unsigned> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size() + 1, false);
  for (unsigned k : images_) {
    if (k == 0 || k > images_.size() || seen[k])
      throw InputError("not a permutation of 1.." + std::to_string(images_.size()));
    seen[k] = true;
  }
}

Permutation Permutation::identity(unsigned n) {
  std::vector<unsigned> v(n);
  for (unsigned i = 0; i < n; ++i) v[i] = i + 1;
  return Permutation(std::move(v));
}

std::vector<Permutation> all_permutations(unsigned n) {
  std::vector<unsigned> v = Permutation::identity(n).images();
  std::vector<Permutation> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

std::string to_string(const Permutation& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.images().size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p.images()[i]);
  }
  return s + ")";
}

RationalMatrix::RationalMatrix(unsigned n) : n_(n), a_(std::size_t(n) * n) {}

RationalMatrix::RationalMatrix(unsigned n, std::vector<Rational> row_major)
    : n_(n), a_(std::move(row_major)) {
  if (a_.size() != std::size_t(n) * n) throw InputError("matrix entry count is not n*n");
}

RationalMatrix RationalMatrix::identity(unsigned n) {
  RationalMatrix m(n);
  for (unsigned i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::vector<Rational> RationalMatrix::column(unsigned j) const {
  std::vector<Rational> c(n_);
  for (unsigned i = 0; i < n_; ++i) c[i] = (*this)(i, j);
  return c;
}

std::vector<Rational> RationalMatrix::apply(std::span<const Rational> y) const {
  if (y.size() != n_) throw InputError("vector length differs from matrix size");
  std::vector<Rational> x(n_);
  for (unsigned i = 0; i < n_; ++i)
    for (unsigned j = 0; j < n_; ++j)
      if ((*this)(i, j) != 0) x[i] += (*this)(i, j) * y[j];
  return x;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.n_ != b.n_) throw InputError("matrix size mismatch");
  RationalMatrix c(a.n_);
  for (unsigned i = 0; i < a.n_; ++i)
    for (unsigned k = 0; k < a.n_; ++k) {
      if (a(i, k) == 0) continue;
      for (unsigned j = 0; j < a.n_; ++j)
        if (b(k, j) != 0) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

RationalMatrix t_matrix(unsigned n) {
  if (n == 0) throw InputError("T_n needs n >= 1");
  RationalMatrix t(n);
  for (unsigned j = 0; j < n; ++j)
    for (unsigned i = 0; i <= j; ++i) t(i, j) = Rational(1, j + 1);
  return t;
}

RationalMatrix wds_matrix(const Permutation& theta) {
  const unsigned n = theta.size();
  RationalMatrix t = t_matrix(n);
  RationalMatrix a(n);
  // Row i of P*T is row k_i of T.
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) a(i, j) = t(theta[i + 1] - 1, j);
  return a;
}

bool is_normal(const RationalMatrix& m) {
  for (unsigned j = 0; j < m.size(); ++j) {
    Rational s = 0;
    for (unsigned i = 0; i < m.size(); ++i) s += m(i, j);
    if (s != 1) return false;
  }
  return true;
}

ComposedSubstitution ComposedSubstitution::identity(unsigned n) {
  return {{}, RationalMatrix::identity(n)};
}

ComposedSubstitution ComposedSubstitution::from_path(unsigned n, std::span<const Permutation> path) {
  ComposedSubstitution c = identity(n);
  for (const auto& theta : path) c = compose(c, theta);
  return c;
}

ComposedSubstitution compose(const ComposedSubstitution& c, const Permutation& theta) {
  if (theta.size() != c.matrix.size()) throw InputError("permutation size differs from matrix size");
  ComposedSubstitution out{c.path, c.matrix * wds_matrix(theta)};
  out.path.push_back(theta);
  return out;
}

AlphaBeta alpha_beta(const ComposedSubstitution& c) {
  const unsigned n = c.matrix.size();
  AlphaBeta ab{c.matrix.column(0), std::vector<std::vector<Rational>>(n)};
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 1; j < n; ++j) ab.beta[i].push_back(c.matrix(i, j) - ab.alpha[i]);
  return ab;
}

namespace {

using Sparse = std::map<Exponents, Integer>;

Sparse multiply(const Sparse& a, const Sparse& b) {
  Sparse out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exponents e = ea;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      out[e] += ca * cb;
    }
  return out;
}

}  // namespace

Substituted substitute(const Form& f, const ComposedSubstitution& c) {
  const unsigned n = f.variables();
  if (c.matrix.size() != n) throw InputError("substitution size differs from variable count");
  const unsigned d = f.degree();
  Integer clear = pow(lcm_upto(n), static_cast<unsigned long>(c.depth()));

  // x_i = sum_j a_ij y_j, scaled to integers by L^m.
  std::vector<Sparse> rows(n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      Rational v = c.matrix(i, j) * clear;
      if (v == 0) continue;
      if (v.get_den() != 1) throw InputError("matrix entry denominator does not divide L^m");
      Exponents e(n, 0);
      e[j] = 1;
      rows[i][e] = v.get_num();
    }

  // powers[i][k] = (row_i)^k, filled on demand
  std::vector<std::vector<Sparse>> powers(n);
  auto power = [&](unsigned i, unsigned k) -> const Sparse& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(Sparse{{Exponents(n, 0), Integer(1)}});
    while (cache.size() <= k) cache.push_back(multiply(cache.back(), rows[i]));
    return cache[k];
  };

  Sparse total;
  for (const auto& [e, coef] : f.terms()) {
    Sparse term{{Exponents(n, 0), coef}};
    for (unsigned i = 0; i < n; ++i)
      if (e[i] != 0) term = multiply(term, power(i, e[i]));
    for (auto& [te, tc] : term) total[te] += tc;
  }

  Form::Terms terms(total.begin(), total.end());
  Form raw(n, std::move(terms));
  Integer content = 0;
  for (const auto& [e, coef] : raw.terms())
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), coef.get_mpz_t());
  Rational scale(pow(clear, d), content);
  scale.canonicalize();
  return {content_normalize(raw), scale};
}

std::vector<WdsChild> wds_children(const Form& f) {
  DenseForm root = DenseForm::from_form(f);
  std::vector<WdsChild> out;
  for (const auto& theta : all_permutations(f.variables())) {
    DenseStep step = wds_step(root, theta);
    out.push_back({theta, step.form.to_form(), step.scale});
  }
  return out;
}

}  // namespace wds
