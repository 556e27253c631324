#pragma once

#include "wds/form.hpp"
#include "wds/rational.hpp"

#include <span>
#include <vector>

namespace wds {

/// Permutation (k1,...,kn) of {1,...,n}, stored with 1-based images.
class Permutation {
public:
  explicit Permutation(std::vector<unsigned> images);
  static Permutation identity(unsigned n);

  unsigned size() const noexcept { return static_cast<unsigned>(images_.size()); }
  /// 1-based image k_i of the 1-based position i.
  unsigned operator[](unsigned i) const { return images_.at(i - 1); }
  const std::vector<unsigned>& images() const noexcept { return images_; }

  friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
  std::vector<unsigned> images_;
};

/// All n! permutations in lexicographic order.
std::vector<Permutation> all_permutations(unsigned n);

std::string to_string(const Permutation& p);

/// Dense n x n matrix of exact rationals, row-major.
class RationalMatrix {
public:
  explicit RationalMatrix(unsigned n);
  RationalMatrix(unsigned n, std::vector<Rational> row_major);
  static RationalMatrix identity(unsigned n);

  unsigned size() const noexcept { return n_; }
  // 0-based
  const Rational& operator()(unsigned i, unsigned j) const { return a_[i * n_ + j]; }
  Rational& operator()(unsigned i, unsigned j) { return a_[i * n_ + j]; }

  std::vector<Rational> column(unsigned j) const;
  std::vector<Rational> apply(std::span<const Rational> y) const;

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

private:
  unsigned n_;
  std::vector<Rational> a_;
};

/// T_n: column j holds 1/j on rows 1..j and 0 below.
RationalMatrix t_matrix(unsigned n);

/// A_theta = P_theta * T_n, where (P_theta)_{ij} = 1 iff j = k_i.
RationalMatrix wds_matrix(const Permutation& theta);

/// Every column sums to exactly one.
bool is_normal(const RationalMatrix& m);

/// x = A_{theta_1} ... A_{theta_m} y, with the path that produced it.
///
/// The columns of `matrix` are the vertices of one cell of the m-fold
/// barycentric subdivision of the simplex.
struct ComposedSubstitution {
  std::vector<Permutation> path;
  RationalMatrix matrix;

  static ComposedSubstitution identity(unsigned n);
  static ComposedSubstitution from_path(unsigned n, std::span<const Permutation> path);
  std::size_t depth() const noexcept { return path.size(); }
};

/// Appends theta to the path and multiplies the matrix by A_theta on the right.
ComposedSubstitution compose(const ComposedSubstitution& c, const Permutation& theta);

/// alpha = first column; beta[i][j-1] = a_ij - alpha_i for j = 2..n
/// (so beta has n rows and n-1 columns).
struct AlphaBeta {
  std::vector<Rational> alpha;
  std::vector<std::vector<Rational>> beta;
};

AlphaBeta alpha_beta(const ComposedSubstitution& c);

/// Integer form g with g(y) = scale * f(matrix * y) for every y, scale > 0.
struct Substituted {
  Form form;
  Rational scale;
};

/// Expands f(matrix * y) by powering the row linear forms, clears the
/// L^{m d} denominator (L = lcm(1..n), m = depth) and divides out the content.
Substituted substitute(const Form& f, const ComposedSubstitution& c);

struct WdsChild {
  Permutation theta;
  Form form;
  Rational scale;
};

/// One rescaled, content-normalized form f(A_theta y) per permutation, in
/// lexicographic permutation order. For n = 1 this is the form itself.
std::vector<WdsChild> wds_children(const Form& f);

}  // namespace wds
