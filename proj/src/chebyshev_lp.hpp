/*! \file chebyshev_lp.hpp
  \brief Best uniform approximation on the Boolean cube by a revised simplex method.

  Solves max { sum_x f(x) w(x) : w orthogonal to every monomial in `monomials`, |w|_1 <= 1 }.
  Its optimum equals min_c max_x |f(x) - sum_S c_S [S subset of x]|; the simplex
  multipliers give the minimizing coefficients.
*/
#pragma once

#include "leafcomm/common.hpp"

#include <vector>

namespace leafcomm::detail {

struct ChebyshevOutcome {
  enum class Status { Optimal, AboveTarget, BelowTarget, IterationLimit } status = Status::Optimal;
  std::vector<double> coef;  // aligned with the monomial list
  double upper = 1.0;        // max error of coef
  double lower = 0.0;        // objective of the current dual point
  int iterations = 0;
};

/*! Stops early when the dual objective exceeds `target` (AboveTarget) or when the
    primal coefficients reach error <= early_accept (BelowTarget). Monomials must
    form a down-closed family (all subsets of size <= d).
*/
ChebyshevOutcome solve_chebyshev(int m, const std::vector<double>& f, const std::vector<u64>& monomials,
                                 double target, double early_accept, int max_iterations = 200000);

}  // namespace leafcomm::detail
