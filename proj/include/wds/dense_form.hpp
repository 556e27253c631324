#pragma once

// Dense coefficient vectors over a fixed monomial basis. This is the hot path
// of the tree search; the public Form type stays the sparse, validated one.

#include "wds/form.hpp"
#include "wds/substitution.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace wds {

/// Monomials of degree d in n variables, in the same graded lex order as Form.
class MonomialTable {
public:
  MonomialTable(unsigned n, unsigned d);

  unsigned variables() const noexcept { return n_; }
  unsigned degree() const noexcept { return d_; }
  std::size_t size() const noexcept { return exps_.size(); }
  const Exponents& exponents(std::size_t idx) const { return exps_[idx]; }
  std::size_t rank(const Exponents& e) const;
  std::size_t axis(unsigned i) const { return axis_[i]; }
  const Integer& lcm() const noexcept { return lcm_; }

  struct ShiftEntry {
    std::uint32_t src;
    std::uint32_t dst;
    unsigned long binom;
  };
  /// Expansion of x_r -> x_r + x_{r+1} (0-based r < n-1).
  const std::vector<ShiftEntry>& shift(unsigned r) const { return shifts_[r]; }
  /// prod_j (L/(j+1))^{e_j}: the diagonal part of L*T_n.
  const Integer& diagonal_weight(std::size_t idx) const { return diag_[idx]; }

  /// Shared, lazily built table for (n, d). Thread safe.
  static std::shared_ptr<const MonomialTable> get(unsigned n, unsigned d);

private:
  unsigned n_, d_;
  std::vector<Exponents> exps_;
  std::vector<std::size_t> axis_;
  std::vector<std::vector<std::size_t>> choose_;  // choose_[a][b] = C(a, b)
  std::vector<std::vector<ShiftEntry>> shifts_;
  std::vector<Integer> diag_;
  Integer lcm_;
};

enum class DenseSign { PosComplete, Nonneg, Mixed };

struct DenseForm {
  std::shared_ptr<const MonomialTable> table;
  std::vector<Integer> coef;

  static DenseForm from_form(const Form& f);
  Form to_form() const;

  unsigned variables() const { return table->variables(); }
  unsigned degree() const { return table->degree(); }
  const Integer& axis_coefficient(unsigned i) const { return coef[table->axis(i)]; }

  /// Divides by the positive content and returns it.
  Integer make_primitive();

  DenseSign sign() const;
  bool operator==(const DenseForm& o) const { return coef == o.coef; }
};

/// Child of a primitive form under one WDS step: L^d f(A_theta y) / content.
struct DenseStep {
  DenseForm form;
  Rational scale;
};

DenseStep wds_step(const DenseForm& f, const Permutation& theta);

}  // namespace wds
