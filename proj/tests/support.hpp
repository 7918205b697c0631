#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include "thinhom/cell.hpp"
#include "thinhom/fem2d.hpp"
#include "thinhom/geometry.hpp"
#include "thinhom/mesh.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Index of the smallest sample of f on a uniform grid of [lo, hi].
inline double grid_argmin(const std::function<double(double)>& f, double lo, double hi, int n) {
  double best_x = lo, best = f(lo);
  for (int i = 1; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double v = f(x);
    if (v < best) best = v, best_x = x;
  }
  return best_x;
}

/// Dense Gaussian elimination with partial pivoting.
inline Eigen::VectorXd dense_solve(Eigen::MatrixXd a, Eigen::VectorXd b) {
  const int n = static_cast<int>(b.size());
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    a.row(k).swap(a.row(p));
    std::swap(b(k), b(p));
    for (int i = k + 1; i < n; ++i) {
      const double m = a(i, k) / a(k, k);
      a.row(i) -= m * a.row(k);
      b(i) -= m * b(k);
    }
  }
  Eigen::VectorXd x(n);
  for (int i = n - 1; i >= 0; --i) x(i) = (b(i) - a.row(i).tail(n - 1 - i).dot(x.tail(n - 1 - i))) / a(i, i);
  return x;
}

/// P1 finite-element solution of the cell problem on
/// (-a, a) x (0, 1), a = eps^alpha: -u_xx - eps^-2 u_yy = 0, u = u0 at y = 0,
/// natural conditions elsewhere, on an n x n grid.
inline thinhom::Field fem_cell(const std::function<double(double)>& u0, double eps, double alpha,
                               int n) {
  using namespace thinhom;
  const double a = std::pow(eps, alpha);
  auto mesh = std::make_shared<const Mesh>(mesh_rectangle(2.0 * a, 1.0, n, n, kGammaBottom, -a, 0.0));
  const SparseSystem sys = assemble(*mesh, [](double, double) { return 0.0; }, Anisotropy::rescaled(eps), 0.0);
  const std::vector<int> fixed = tagged_nodes(*mesh, BoundaryTag::Gamma0);
  Eigen::VectorXd values(fixed.size());
  for (std::size_t i = 0; i < fixed.size(); ++i) values(i) = u0(mesh->nodes(0, fixed[i]));
  return solve_with_dirichlet(sys, mesh, fixed, values, SolverOptions{1e-13, 200000});
}

/// Least-squares slope of log(v) against t.
inline double log_slope(const std::vector<double>& t, const std::vector<double>& v) {
  const int n = static_cast<int>(t.size());
  double st = 0, sv = 0, stt = 0, stv = 0;
  for (int i = 0; i < n; ++i) {
    const double lv = std::log(v[i]);
    st += t[i], sv += lv, stt += t[i] * t[i], stv += t[i] * lv;
  }
  return (n * stv - st * sv) / (n * stt - st * st);
}

/// G(x, y) = base + amp * (1 - cos(2 pi y)) / 2 style profiles, written with the
/// sine waveform at phase 3/4: (1 + sin(2 pi (y + 3/4))) / 2 = (1 - cos(2 pi y)) / 2.
inline thinhom::ProfileSpec one_minus_cos(double b, std::vector<double> base, double alpha,
                                          std::vector<double> b_poly = {}) {
  using namespace thinhom;
  return ProfileSpec(b_poly.empty() ? ScalarFunction1D::constant(b) : ScalarFunction1D(Polynomial{b_poly}),
                     Waveform(WaveKind::Sine, 0.75), ScalarFunction1D(Polynomial{std::move(base)}),
                     ScalarFunction1D::constant(2.0), ScalarFunction1D::constant(1.0), alpha);
}

/// G(x, y) = c + s * sin(2 pi y / l) written as base + amp * waveform.
inline thinhom::ProfileSpec shifted_sine(double b, double c, double s, double l, double alpha) {
  using namespace thinhom;
  return ProfileSpec(ScalarFunction1D::constant(b), Waveform(WaveKind::Sine),
                     ScalarFunction1D::constant(c - s), ScalarFunction1D::constant(2.0 * s),
                     ScalarFunction1D::constant(l), alpha);
}

}  // namespace oracle
