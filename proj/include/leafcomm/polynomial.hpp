/*! \file polynomial.hpp
  \brief Exact multilinear polynomials and approximating polynomials for formulas.

  Approximations of a formula are polynomials in its leaf values: variable i is
  leaf i. Products are reduced with y^2 = y (zero_one) or z^2 = 1 (plus_minus), so
  two polynomials are equal iff they agree on every Boolean point.
*/
#pragma once

#include "leafcomm/common.hpp"
#include "leafcomm/formula.hpp"

#include <map>
#include <optional>
#include <vector>

namespace leafcomm {

enum class Basis { ZeroOne, PlusMinus };

class MultilinearPoly {
 public:
  MultilinearPoly() = default;
  MultilinearPoly(Basis basis, int n) : basis_(basis), n_(n) {}

  Basis basis() const { return basis_; }
  int num_vars() const { return n_; }
  const std::map<u64, Rational>& terms() const { return terms_; }
  std::size_t support_size() const { return terms_.size(); }

  /// Adds c to the coefficient of the monomial `subset`; drops it if it becomes zero.
  void add(u64 subset, const Rational& c);
  Rational coefficient(u64 subset) const;

  int degree() const;
  Rational l1_norm() const;
  Rational max_abs_coefficient() const;

  /// Value at a Boolean point; in plus_minus basis bit 1 stands for -1.
  Rational eval(u64 x) const;
  /// Value at an arbitrary rational point (zero_one coordinates or +-1 coordinates per basis).
  Rational eval_at(const std::vector<Rational>& point) const;

  bool operator==(const MultilinearPoly& o) const = default;

 private:
  Basis basis_ = Basis::ZeroOne;
  int n_ = 0;
  std::map<u64, Rational> terms_;
};

Rational eval_poly(const MultilinearPoly& p, u64 x);

/// Mobius interpolation of a table over {0,1}^m (m <= 20).
MultilinearPoly exact_multilinear(const std::vector<std::uint8_t>& table);
MultilinearPoly multilinear_from_values(const std::vector<Rational>& values);
/// Values at all Boolean points, index = point (zero_one basis, n <= 24).
std::vector<Rational> values_on_cube(const MultilinearPoly& p);

/// Substitutes x_i -> (1 - z_i)/2 or z_i -> 1 - 2 y_i; checks |q|_1 <= n^d 4^d max|p(S)|.
MultilinearPoly convert_basis(const MultilinearPoly& p);

/// Max over the cube of |p(x) - table(x)|.
Rational max_error(const MultilinearPoly& p, const std::vector<std::uint8_t>& table);

// ---------------------------------------------------------------- base construction

struct LpStats {
  int lp_solves = 0;
  int simplex_iterations = 0;
  int exact_checks = 0;
  int degree_increments = 0;
  int certified_by_bounds = 0;
};

struct BaseApprox {
  MultilinearPoly poly;  // zero_one basis over the m inputs
  int degree = 0;
  Rational error;        // exact max pointwise error
  LpStats stats;
};

/// Minimum-degree eps-approximation of a function on {0,1}^m (m <= 16), by binary search over degrees.
BaseApprox approx_base(const std::vector<std::uint8_t>& table, const Rational& eps);
BaseApprox approx_base(const Skeleton& piece, const Rational& eps);

/*! \brief Feasibility of a degree-d eps-approximation decided by the linear program alone.

  Returns the certified polynomial when the solver's candidate passes the exact check.
*/
std::optional<MultilinearPoly> lp_feasible(const std::vector<std::uint8_t>& table, int d, const Rational& eps,
                                           LpStats* stats = nullptr);

// ---------------------------------------------------------------- amplification

/// Power-basis coefficients of a(y) = sum_{i > r/2} C(r,i) y^i (1-y)^(r-i), r odd.
std::vector<Rational> majority_amplifier(int r);
Rational eval_univariate(const std::vector<Rational>& coeffs, const Rational& y);

/// Smallest odd r with a((2b)/(1+2b)) <= eps, i.e. sup error <= eps for inputs within b of {0,1}.
int amplifier_degree(const Rational& in_error, const Rational& eps);

struct Amplifier {
  Rational in_error;  // b: inputs lie within b of a Boolean value
  int r = 1;
  std::vector<Rational> coeffs;
  Rational out_error;
  /// a((v + b)/(1 + 2b)).
  Rational apply(const Rational& v) const;
};

Amplifier make_amplifier(const Rational& in_error, const Rational& eps);

/// a(p) reduced to multilinear form (p over at most 20 variables). Returns p when eps >= in_error.
MultilinearPoly amplify(const MultilinearPoly& p, const Rational& eps, const Rational& in_error = Rational(1, 3));

// ---------------------------------------------------------------- composition

struct ErrorBudget {
  Rational top_eps = Rational(1, 20);
  Rational piece_eps;
  Rational final_eps;
};

/*! \brief Approximation of a whole formula kept in composed form.

  Pieces are evaluated bottom-up on a leaf assignment; each piece output Q is
  shifted to q = (Q + e)/(1 + 2e) where e is the piece's certified error.
*/
class ComposedApprox {
 public:
  CompositionTree tree;
  std::vector<BaseApprox> pieces;
  BaseApprox top;
  ErrorBudget budget;
  Rational compose_error;    // certified bound after composition
  std::optional<Amplifier> amplifier;
  Rational error_bound;      // certified bound of the final value
  int nominal_degree = 0;    // degree as a composed expression in the leaves
  LpStats stats;
  std::vector<std::vector<Rational>> piece_tables;  // values of each piece polynomial on its input cube
  std::vector<Rational> top_table;

  int num_leaves() const { return tree.num_leaves; }
  Rational eval_leaves(const std::vector<std::uint8_t>& leaf_values) const;
  Rational eval_composed(const std::vector<std::uint8_t>& leaf_values) const;
  /// Expanded polynomial in the leaves (num_leaves <= max_vars).
  MultilinearPoly expand(int max_vars = 20) const;
  /// Expanded polynomial in the formula inputs x (n <= 20).
  MultilinearPoly input_poly(const Formula& f) const;
  /// Max over all 2^n inputs of |p(leaves(x)) - f(x)|.
  Rational max_input_error(const Formula& f) const;

 private:
  std::vector<Rational> placeholder_values(const std::vector<std::uint8_t>& leaf_values) const;
};

/// Substitutes shifted piece approximations into the top approximation.
ComposedApprox compose(const CompositionTree& tree, std::vector<BaseApprox> pieces, BaseApprox top,
                       const ErrorBudget& budget);
/// Expanded form of compose for small leaf counts.
MultilinearPoly compose_expanded(const CompositionTree& tree, const std::vector<MultilinearPoly>& piece_polys,
                                 const MultilinearPoly& top_poly, const ErrorBudget& budget);

/// decompose(t = ceil(sqrt s)) -> approx_base per piece and top -> compose -> amplify to eps.
ComposedApprox build_approx(const Formula& f, const Rational& eps);
ComposedApprox build_approx(const Skeleton& sk, const Rational& eps);

/// Degree constant c = degree / (sqrt(s) log2(s) log2(1/eps)), logged by experiments.
double degree_constant(int degree, int s, const Rational& eps);

std::string basis_name(Basis b);

}  // namespace leafcomm
