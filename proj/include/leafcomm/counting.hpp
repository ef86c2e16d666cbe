/*! \file counting.hpp
  \brief Model counting for formulas over leaf gates with cheap protocols.

  The fast path fixes n' restriction variables (the lowest ceil(n'/2) of Alice's
  half and floor(n'/2) of Bob's), approximates the formula in its leaf values to
  within 1/(3 2^n'), and writes Q'(x) = sum_z P(leaves(z, x)) as a product of a
  (left inputs x terms) matrix with a (terms x right inputs) matrix. Each term is
  a restriction z, a monomial S, and one 1-output transcript per leaf of S.
*/
#pragma once

#include "leafcomm/common.hpp"
#include "leafcomm/formula.hpp"
#include "leafcomm/polynomial.hpp"
#include "leafcomm/protocols.hpp"

#include <optional>
#include <string>
#include <vector>

namespace leafcomm {

struct LeafDevice {
  Formula formula;
  std::vector<RandomizedPtr> protocols;  // one per leaf, two-party split

  int num_vars() const { return formula.num_vars(); }
  bool deterministic() const;
  /// Largest declared leaf protocol cost.
  int max_cost() const;
};

/// Device with the default protocol for each leaf gate (LTF leaves at error delta).
LeafDevice make_device(const Formula& f, const Rational& delta = Rational(1, 1024));

BigInt count_sat_bruteforce(const LeafDevice& d);
BigInt count_sat_bruteforce(const Formula& f);

/// max(1, min(n - 2, floor(n / (c sqrt(s) log2(s)^2 D)))) with log2(s)^2 floored at 1.
int choose_nprime(int n, int s, int D, double c);

enum class TermMode { Pruned, Full };
enum class MatmulBackend { SparseOuter, Dense };

struct FastCountOptions {
  int nprime = 1;
  TermMode term_mode = TermMode::Pruned;
  MatmulBackend backend = MatmulBackend::SparseOuter;
  u64 memory_cap = u64{1} << 26;
  /// Overrides the approximating polynomial (zero_one basis over the leaves).
  std::optional<MultilinearPoly> polynomial;
  /// Check every leaf rectangle against its gate (deterministic devices).
  bool check_leaves = true;
  /// Throw when |Q'(x) - round| > 1/3; randomized runs record instead.
  bool strict_rounding = true;
};

struct FastCountResult {
  BigInt count;
  u64 terms = 0;          // m: materialized terms
  u64 candidates = 0;     // transcript extensions examined
  int nprime = 0;
  int degree = 0;         // degree of the expanded polynomial
  int nominal_degree = 0; // degree of the composed construction
  std::size_t support = 0;
  Rational approx_eps;
  Rational max_gap;       // max_x |Q'(x) - round(Q'(x))|
  bool gap_violated = false;
  std::vector<BigInt> per_x;  // rounded Q(x), index x_L + 2^{free_L} x_R
  double wall_ms = 0;
  std::string backend;
};

/// Leaf polynomial used by the fast path: build_approx(f, 1/(3 2^n')) expanded over the leaves.
MultilinearPoly counting_polynomial(const Formula& f, int nprime, int* nominal_degree = nullptr);

FastCountResult count_sat_fast(const LeafDevice& d, const FastCountOptions& opt);

/// Independent product-formula count: sum_z sum_{S in support} prod_{i in S} |Leaves_1(i, z)|.
BigInt term_count_product_formula(const LeafDevice& d, const MultilinearPoly& p, int nprime);

struct RandomizedCountResult {
  BigInt count;
  int repetitions = 0;      // outer runs
  Rational eps_prime;       // per-leaf target error
  Rational run_failure;     // per-x failure bound of one run
  std::vector<int> leaf_reps;  // majority copies per leaf (0: none)
  u64 terms = 0;            // summed over runs
  double wall_ms = 0;
};

RandomizedCountResult count_sat_randomized(const LeafDevice& d, int nprime, double confidence, u64 seed);

// ---------------------------------------------------------------- matrices

using RationalMatrix = std::vector<std::vector<Rational>>;
/// Standard blocked product; throws on dimension mismatch.
RationalMatrix matmul(const RationalMatrix& a, const RationalMatrix& b);

std::string backend_name(MatmulBackend b);

}  // namespace leafcomm
