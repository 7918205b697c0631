#include "thinhom/fem1d.hpp"

#include "thinhom/errors.hpp"
#include "thinhom/io.hpp"
#include "thinhom/numerics.hpp"

#include <cmath>
#include <ostream>

namespace thinhom {

Limit1DSolution solve_limit(const LimitCoefficients& coeffs) {
  const Eigen::Index n = coeffs.grid.size();
  if (n < 3) throw PreconditionError("fem1d", "grid needs at least 3 points");
  if (coeffs.a_values.size() != n || coeffs.c_values.size() != n || coeffs.fhat_values.size() != n)
    throw PreconditionError("fem1d", "coefficient samples do not match the grid");
  if ((coeffs.a_values.array() <= 0.0).any())
    throw PreconditionError("fem1d", "diffusion coefficient a must be positive");
  if ((coeffs.c_values.array() <= 0.0).any())
    throw PreconditionError("fem1d", "reaction coefficient c must be positive");

  // Symmetric tridiagonal matrix: diag(i), off(i) couples i and i+1.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off = Eigen::VectorXd::Zero(n - 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  const auto& x = coeffs.grid;
  const auto& f = coeffs.fhat_values;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double h = x(k + 1) - x(k);
    if (!(h > 0.0)) throw PreconditionError("fem1d", "grid must be strictly increasing");
    const double a = 0.5 * (coeffs.a_values(k) + coeffs.a_values(k + 1));
    const double c = 0.5 * (coeffs.c_values(k) + coeffs.c_values(k + 1));
    diag(k) += a / h + c * h / 3.0;
    diag(k + 1) += a / h + c * h / 3.0;
    off(k) += -a / h + c * h / 6.0;
    rhs(k) += h / 6.0 * (2.0 * f(k) + f(k + 1));
    rhs(k + 1) += h / 6.0 * (f(k) + 2.0 * f(k + 1));
  }

  // LDL^T: L unit lower bidiagonal with subdiagonal l, D = d.
  Eigen::VectorXd d(n), l(n - 1);
  d(0) = diag(0);
  for (Eigen::Index k = 1; k < n; ++k) {
    if (!(d(k - 1) > 0.0)) throw NumericError("fem1d", "singular limit system");
    l(k - 1) = off(k - 1) / d(k - 1);
    d(k) = diag(k) - l(k - 1) * off(k - 1);
  }
  if (!(d(n - 1) > 0.0)) throw NumericError("fem1d", "singular limit system");
  Eigen::VectorXd u = rhs;
  for (Eigen::Index k = 1; k < n; ++k) u(k) -= l(k - 1) * u(k - 1);
  u.array() /= d.array();
  for (Eigen::Index k = n - 2; k >= 0; --k) u(k) -= l(k) * u(k + 1);
  return {x, u};
}

double Limit1DSolution::operator()(double at) const {
  if (!(at >= -1e-12 && at <= 1.0 + 1e-12))
    throw DomainError("fem1d", "x = " + format_double(at) + " outside [0, 1]");
  return interpolate_linear(grid, values, at);
}

double evaluate(const Limit1DSolution& sol, double x) { return sol(x); }

double l2_error(const Limit1DSolution& sol, const Function1D& exact) {
  static const GaussRule<double> rule = gauss_legendre<double>(4);
  double sum = 0.0;
  for (Eigen::Index k = 0; k + 1 < sol.grid.size(); ++k) {
    const double x0 = sol.grid(k), x1 = sol.grid(k + 1);
    const double u0 = sol.values(k), u1 = sol.values(k + 1);
    sum += composite_gauss(
        [&](double x) {
          const double s = (x - x0) / (x1 - x0);
          const double d = (1.0 - s) * u0 + s * u1 - exact(x);
          return d * d;
        },
        x0, x1, 1, rule);
  }
  return std::sqrt(sum);
}

double l2_norm(const Eigen::VectorXd& grid, const Eigen::VectorXd& values) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k + 1 < grid.size(); ++k) {
    const double h = grid(k + 1) - grid(k);
    const double a = values(k), b = values(k + 1);
    sum += h / 3.0 * (a * a + a * b + b * b);
  }
  return std::sqrt(sum);
}

void write_solution_csv(std::ostream& os, const Limit1DSolution& sol) {
  os << "x,u0\n";
  for (Eigen::Index i = 0; i < sol.grid.size(); ++i)
    os << format_double(sol.grid(i)) << ',' << format_double(sol.values(i)) << '\n';
}

}  // namespace thinhom
