#pragma once

// P1 Galerkin solver for the one-dimensional Neumann limit problems
//   -(a u')' + c u = fhat  on (0, 1),  u'(0) = u'(1) = 0.

#include "thinhom/homogenize.hpp"

#include <Eigen/Core>

#include <iosfwd>

namespace thinhom {

struct Limit1DSolution {
  Eigen::VectorXd grid;
  Eigen::VectorXd values;

  /// Piecewise-linear interpolation; throws DomainError outside [0, 1].
  double operator()(double x) const;
};

/// Cell coefficients are the averages of the two endpoint samples of a and c;
/// the load integrates the piecewise-linear interpolant of fhat exactly. The
/// tridiagonal system is solved by an LDL^T factorization.
Limit1DSolution solve_limit(const LimitCoefficients& coeffs);

double evaluate(const Limit1DSolution& sol, double x);

/// L2(0,1) distance to an exact function, 4-point Gauss per cell.
double l2_error(const Limit1DSolution& sol, const Function1D& exact);

/// L2(0,1) norm of the piecewise-linear interpolant of nodal samples.
double l2_norm(const Eigen::VectorXd& grid, const Eigen::VectorXd& values);

/// CSV "x,u0".
void write_solution_csv(std::ostream& os, const Limit1DSolution& sol);

}  // namespace thinhom
