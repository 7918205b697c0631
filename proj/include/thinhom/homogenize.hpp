#pragma once

// Closed-form homogenized data of the one-dimensional limit problems.

#include "thinhom/combgeom.hpp"
#include "thinhom/fem2d.hpp"
#include "thinhom/geometry.hpp"

#include <Eigen/Core>

#include <iosfwd>

namespace thinhom {

/// Coefficients of  -(a u')' + c u = fhat,  u'(0) = u'(1) = 0, sampled on a
/// grid of [0, 1].
struct LimitCoefficients {
  Eigen::VectorXd grid;
  Eigen::VectorXd a_values;
  Eigen::VectorXd c_values;
  Eigen::VectorXd fhat_values;
};

/// Uniform grid of n points on [0, 1].
Eigen::VectorXd uniform_grid(int n);

/// a = b + G0,  c = b + period average of G.
LimitCoefficients coeffs_type1(const ProfileSpec& spec, const Eigen::VectorXd& grid);

/// a = b,  c = b + |Q0| / L.
LimitCoefficients coeffs_type2(const CombSpec& spec, const Eigen::VectorXd& grid);

/// d = L b / (L b + integral of G over one period), for an x-independent
/// L-periodic profile G with minimum 0. Throws PreconditionError when the
/// minimum exceeds 1e-10.
double effective_diffusion_periodic(double b, double L, const Function1D& G,
                                    const std::vector<double>& breakpoints = {});

/// fhat^eps(x) = integral of f(x, .) over the vertical section of Omega^eps
/// at x, by 32-point Gauss-Legendre rules on each section interval.
Eigen::VectorXd fhat_epsilon(const Source2D& f, const ProfileSpec& spec, double eps,
                             const Eigen::VectorXd& grid);
Eigen::VectorXd fhat_epsilon(const Source2D& f, const CombSpec& spec, double eps,
                             const Eigen::VectorXd& grid);

/// For f depending on x1 only the limit right-hand side is c(x) f(x).
Eigen::VectorXd fhat_limit_for_x_only_f(const Function1D& f, const LimitCoefficients& coeffs);

/// |integral over (0,1) of (teeth section measure - |Q0| / L) phi|.
double section_measure_residual(const CombSpec& spec, double eps, const Function1D& phi,
                                const std::vector<double>& phi_breaks = {});

/// CSV "x,a,c,fhat".
void write_coefficients_csv(std::ostream& os, const LimitCoefficients& c);

}  // namespace thinhom
