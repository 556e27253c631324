#include "wds/form.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace wds {

unsigned total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0u); }

bool GradedLexGreater::operator()(const Exponents& a, const Exponents& b) const {
  unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Form::Form(unsigned n, Terms terms) : n_(n) {
  if (n == 0) throw InputError("a form needs at least one variable");
  std::erase_if(terms, [](const auto& t) { return t.second == 0; });
  if (terms.empty()) throw InputError("zero form: degree undefined");
  d_ = total_degree(terms.begin()->first);
  for (const auto& [e, c] : terms) {
    if (e.size() != n) throw InputError("exponent vector length differs from variable count");
    if (total_degree(e) != d_)
      throw InputError("non-homogeneous polynomial: total degrees " + std::to_string(d_) + " and " +
                       std::to_string(total_degree(e)));
  }
  terms_ = std::move(terms);
}

Integer Form::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Integer(0) : it->second;
}

Integer Form::monomial_count() const { return binomial(d_ + n_ - 1, n_ - 1); }

SimplexPoint::SimplexPoint(std::vector<Rational> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InputError("simplex point needs at least one coordinate");
  Rational sum = 0;
  for (const auto& c : coords_) {
    if (c < 0) throw InputError("simplex point has a negative coordinate");
    sum += c;
  }
  if (sum != 1) throw InputError("simplex point coordinates do not sum to 1");
}

std::string_view to_string(SignCategory c) {
  switch (c) {
    case SignCategory::AllPositiveComplete: return "AllPositiveComplete";
    case SignCategory::AllNonnegative: return "AllNonnegative";
    case SignCategory::Mixed: return "Mixed";
    case SignCategory::AllNegativeComplete: return "AllNegativeComplete";
  }
  return "?";
}

namespace {

// Monomial keyed by variable index; the variable count is fixed after parsing.
struct SparseTerm {
  std::map<unsigned, unsigned> powers;
  Integer coef;
};

class Parser {
public:
  explicit Parser(std::string_view text) : s_(text) {}

  std::vector<SparseTerm> run() {
    skip_ws();
    if (pos_ == s_.size()) throw ParseError("empty polynomial", pos_);
    bool first = true;
    while (true) {
      skip_ws();
      if (pos_ == s_.size()) break;
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        throw ParseError("expected '+' or '-'", pos_);
      }
      first = false;
      term(sign);
    }
    return std::move(terms_);
  }

  unsigned max_index() const { return max_index_; }

private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string digits() {
    std::string out;
    while (true) {
      skip_ws();
      if (!std::isdigit(static_cast<unsigned char>(peek()))) break;
      out.push_back(s_[pos_++]);
    }
    return out;
  }

  unsigned small_number(const char* what) {
    std::size_t at = pos_;
    std::string ds = digits();
    if (ds.empty()) throw ParseError(std::string("expected ") + what, at);
    if (ds.size() > 9) throw ParseError(std::string(what) + " too large", at);
    return static_cast<unsigned>(std::stoul(ds));
  }

  void term(int sign) {
    skip_ws();
    SparseTerm t{{}, Integer(sign)};
    bool any = false;
    // signed integer after the operator, e.g. "x1 + -3*x2"
    if (peek() == '+' || peek() == '-') {
      if (peek() == '-') t.coef = -t.coef;
      ++pos_;
      skip_ws();
    }
    std::size_t term_at = pos_;
    std::string ds = digits();
    if (!ds.empty()) {
      t.coef *= Integer(ds, 10);
      any = true;
      skip_ws();
      if (peek() == '.' || peek() == '/') throw ParseError("non-integer coefficient", pos_);
    }
    while (true) {
      skip_ws();
      std::size_t at = pos_;
      if (peek() == '*') {
        if (!any) throw ParseError("'*' without a preceding factor", pos_);
        ++pos_;
        skip_ws();
        if (peek() != 'x') {
          if (std::isdigit(static_cast<unsigned char>(peek())))
            throw ParseError("numeric factor after a variable or coefficient", pos_);
          throw ParseError("expected variable after '*'", pos_);
        }
      }
      if (peek() != 'x') {
        pos_ = at;
        break;
      }
      ++pos_;
      std::size_t idx_at = pos_;
      unsigned idx = small_number("variable index");
      if (idx == 0) throw ParseError("variable indices start at 1", idx_at);
      unsigned e = 1;
      skip_ws();
      if (peek() == '^') {
        ++pos_;
        e = small_number("exponent");
      }
      t.powers[idx] += e;
      max_index_ = std::max(max_index_, idx);
      any = true;
    }
    if (!any) throw ParseError("expected a coefficient or variable", term_at);
    skip_ws();
    if (pos_ < s_.size() && peek() != '+' && peek() != '-')
      throw ParseError(std::string("unexpected character '") + peek() + "'", pos_);
    terms_.push_back(std::move(t));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  unsigned max_index_ = 0;
  std::vector<SparseTerm> terms_;
};

}  // namespace

Form parse_form(std::string_view text, std::optional<unsigned> n_override) {
  Parser p(text);
  std::vector<SparseTerm> sparse = p.run();
  unsigned n = std::max(1u, p.max_index());
  if (n_override) {
    if (*n_override == 0) throw InputError("variable count must be at least 1");
    if (*n_override < p.max_index())
      throw InputError("variable x" + std::to_string(p.max_index()) + " exceeds n = " +
                       std::to_string(*n_override));
    n = *n_override;
  }
  Form::Terms terms;
  std::optional<unsigned> degree;
  for (auto& [powers, coef] : sparse) {
    Exponents e(n, 0);
    for (auto [idx, pw] : powers) e[idx - 1] = pw;
    unsigned deg = total_degree(e);
    if (degree && *degree != deg)
      throw InputError("non-homogeneous polynomial: total degrees " + std::to_string(*degree) +
                       " and " + std::to_string(deg));
    degree = deg;
    terms[e] += coef;
  }
  return Form(n, std::move(terms));
}

std::string emit(const Form& f, char var) {
  std::string out;
  bool first = true;
  for (const auto& [e, c] : f.terms()) {
    bool neg = c < 0;
    Integer mag = abs(c);
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    bool constant = total_degree(e) == 0;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += var + std::to_string(i + 1);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mag != 1 || constant) {
      out += mag.get_str();
      if (!constant) out += "*";
    }
    out += mono;
  }
  return out;
}

Integer coefficient_bound(const Form& f) {
  Integer m = 0;
  for (const auto& [e, c] : f.terms())
    if (abs(c) > m) m = abs(c);
  return m;
}

Rational evaluate(const Form& f, std::span<const Rational> point) {
  if (point.size() != f.variables())
    throw InputError("point has " + std::to_string(point.size()) + " coordinates, form has " +
                     std::to_string(f.variables()) + " variables");
  // powers[i][k] = point[i]^k
  std::vector<std::vector<Rational>> powers(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    powers[i].resize(f.degree() + 1);
    powers[i][0] = 1;
    for (unsigned k = 1; k <= f.degree(); ++k) powers[i][k] = powers[i][k - 1] * point[i];
  }
  Rational sum = 0;
  for (const auto& [e, c] : f.terms()) {
    Rational term = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) term *= powers[i][e[i]];
    sum += term;
  }
  return sum;
}

Exponents axis_power(unsigned n, unsigned d, unsigned i) {
  Exponents e(n, 0);
  e[i] = d;
  return e;
}

SignSummary sign_summary(const Form& f) {
  SignSummary s;
  bool any_neg = false, any_pos = false;
  for (const auto& [e, c] : f.terms()) (c < 0 ? any_neg : any_pos) = true;
  bool complete = f.monomial_count() == f.term_count();
  if (!any_neg)
    s.category = complete ? SignCategory::AllPositiveComplete : SignCategory::AllNonnegative;
  else if (!any_pos && complete)
    s.category = SignCategory::AllNegativeComplete;
  else
    s.category = SignCategory::Mixed;
  for (unsigned i = 0; i < f.variables(); ++i) {
    Integer c = f.coefficient(axis_power(f.variables(), f.degree(), i));
    if (c < 0) s.negative_axis_powers.push_back(i);
    if (c == 0) s.zero_axis_powers.push_back(i);
  }
  return s;
}

Form content_normalize(const Form& f) {
  Integer g = 0;
  for (const auto& [e, c] : f.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g == 1) return f;
  Form::Terms terms;
  for (const auto& [e, c] : f.terms()) {
    Integer q;
    mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    terms.emplace_hint(terms.end(), e, std::move(q));
  }
  return Form(f.variables(), std::move(terms));
}

}  // namespace wds
