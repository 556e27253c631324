#include "wds/dense_form.hpp"

#include <map>
#include <mutex>
#include <utility>

namespace wds {

namespace {

void compositions(unsigned n, unsigned d, Exponents& cur, unsigned i, std::vector<Exponents>& out) {
  if (i + 1 == n) {
    cur[i] = d;
    out.push_back(cur);
    return;
  }
  for (unsigned v = d + 1; v-- > 0;) {
    cur[i] = v;
    compositions(n, d - v, cur, i + 1, out);
  }
}

}  // namespace

MonomialTable::MonomialTable(unsigned n, unsigned d) : n_(n), d_(d) {
  if (n == 0) throw InputError("monomial table needs n >= 1");
  Integer count = binomial(d + n - 1, n - 1);
  if (count > 50'000'000)
    throw BudgetExceeded("too many monomials for a dense table", count);
  if (d > 62) throw InputError("degree too large for the dense substitution path");

  choose_.assign(d + n + 1, std::vector<std::size_t>(d + n + 1, 0));
  for (unsigned a = 0; a <= d + n; ++a) {
    choose_[a][0] = 1;
    for (unsigned b = 1; b <= a; ++b) choose_[a][b] = choose_[a - 1][b - 1] + choose_[a - 1][b];
  }

  Exponents cur(n, 0);
  compositions(n, d, cur, 0, exps_);
  for (unsigned i = 0; i < n; ++i) axis_.push_back(rank(axis_power(n, d, i)));

  lcm_ = lcm_upto(n);
  shifts_.resize(n > 0 ? n - 1 : 0);
  for (unsigned r = 0; r + 1 < n; ++r) {
    for (std::size_t idx = 0; idx < exps_.size(); ++idx) {
      Exponents e = exps_[idx];
      unsigned k = e[r];
      for (unsigned t = 0; t <= k; ++t) {
        Exponents g = e;
        g[r] -= t;
        g[r + 1] += t;
        shifts_[r].push_back({static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(rank(g)),
                              static_cast<unsigned long>(choose_[k][t])});
      }
    }
  }
  diag_.reserve(exps_.size());
  for (const auto& e : exps_) {
    Integer w = 1;
    for (unsigned j = 0; j < n; ++j) {
      Integer step = lcm_ / (j + 1);
      w *= pow(step, e[j]);
    }
    diag_.push_back(std::move(w));
  }
}

std::size_t MonomialTable::rank(const Exponents& e) const {
  // Count monomials that precede e: same prefix, larger entry at position i.
  std::size_t idx = 0;
  unsigned rest = d_;
  for (unsigned i = 0; i + 1 < n_; ++i) {
    unsigned tail = n_ - i - 2;
    for (unsigned v = e[i] + 1; v <= rest; ++v) idx += choose_[rest - v + tail][tail];
    rest -= e[i];
  }
  return idx;
}

std::shared_ptr<const MonomialTable> MonomialTable::get(unsigned n, unsigned d) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, unsigned>, std::shared_ptr<const MonomialTable>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{n, d}];
  if (!slot) slot = std::make_shared<const MonomialTable>(n, d);
  return slot;
}

DenseForm DenseForm::from_form(const Form& f) {
  DenseForm out{MonomialTable::get(f.variables(), f.degree()), {}};
  out.coef.assign(out.table->size(), Integer(0));
  for (const auto& [e, c] : f.terms()) out.coef[out.table->rank(e)] = c;
  return out;
}

Form DenseForm::to_form() const {
  Form::Terms terms;
  for (std::size_t i = 0; i < coef.size(); ++i)
    if (coef[i] != 0) terms.emplace_hint(terms.end(), table->exponents(i), coef[i]);
  return Form(table->variables(), std::move(terms));
}

Integer DenseForm::make_primitive() {
  Integer g = 0;
  for (const auto& c : coef) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) return g;
  }
  if (g == 0) throw InputError("zero form: degree undefined");
  for (auto& c : coef) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return g;
}

DenseSign DenseForm::sign() const {
  bool complete = true, negative = false;
  for (const auto& c : coef) {
    int s = sgn(c);
    if (s < 0) negative = true;
    if (s == 0) complete = false;
  }
  if (negative) return DenseSign::Mixed;
  return complete ? DenseSign::PosComplete : DenseSign::Nonneg;
}

DenseStep wds_step(const DenseForm& f, const Permutation& theta) {
  const MonomialTable& t = *f.table;
  const unsigned n = t.variables();
  if (theta.size() != n) throw InputError("permutation size differs from variable count");

  // x_i = x'_{k_i}: move the exponent of x_i onto x'_{k_i}.
  std::vector<Integer> cur(t.size());
  Exponents moved(n);
  for (std::size_t idx = 0; idx < t.size(); ++idx) {
    if (f.coef[idx] == 0) continue;
    const Exponents& e = t.exponents(idx);
    for (unsigned i = 0; i < n; ++i) moved[theta[i + 1] - 1] = e[i];
    cur[t.rank(moved)] = f.coef[idx];
  }

  // x' = U z with U the upper triangular all-ones matrix, as n-1 shifts.
  std::vector<Integer> next(t.size());
  for (unsigned r = 0; r + 1 < n; ++r) {
    for (auto& c : next) c = 0;
    for (const auto& s : t.shift(r)) {
      if (cur[s.src] == 0) continue;
      mpz_addmul_ui(next[s.dst].get_mpz_t(), cur[s.src].get_mpz_t(), s.binom);
    }
    std::swap(cur, next);
  }

  // z_j = (L/j) y_j, so that the whole step is f(L * A_theta * y).
  for (std::size_t idx = 0; idx < t.size(); ++idx)
    if (cur[idx] != 0) cur[idx] *= t.diagonal_weight(idx);

  DenseStep out{DenseForm{f.table, std::move(cur)}, Rational(0)};
  Integer content = out.form.make_primitive();
  out.scale = Rational(pow(t.lcm(), t.degree()), content);
  out.scale.canonicalize();
  return out;
}

}  // namespace wds
