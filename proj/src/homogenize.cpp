#include "thinhom/homogenize.hpp"

#include "thinhom/errors.hpp"
#include "thinhom/io.hpp"
#include "thinhom/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace thinhom {

namespace {

const GaussRule<double>& gauss32() {
  static const GaussRule<double> rule = gauss_legendre<double>(32);
  return rule;
}

double section_integral(const Source2D& f, double x, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  return composite_gauss([&](double y) { return f(x, y); }, lo, hi, 1, gauss32());
}

}  // namespace

Eigen::VectorXd uniform_grid(int n) {
  if (n < 2) throw ConfigError("homogenize", "grid needs at least two points");
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) g(i) = static_cast<double>(i) / (n - 1);
  return g;
}

LimitCoefficients coeffs_type1(const ProfileSpec& spec, const Eigen::VectorXd& grid) {
  LimitCoefficients c;
  c.grid = grid;
  c.a_values.resize(grid.size());
  c.c_values.resize(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double b = spec.b(grid(i));
    c.a_values(i) = b + min_over_period(spec, grid(i));
    c.c_values(i) = b + cell_average(spec, grid(i));
  }
  return c;
}

LimitCoefficients coeffs_type2(const CombSpec& spec, const Eigen::VectorXd& grid) {
  const double coverage = cell_area(spec) / spec.cell_width();
  LimitCoefficients c;
  c.grid = grid;
  c.a_values.resize(grid.size());
  c.c_values.resize(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double b = spec.b(grid(i));
    c.a_values(i) = b;
    c.c_values(i) = coverage + b;
  }
  return c;
}

double effective_diffusion_periodic(double b, double L, const Function1D& G,
                                    const std::vector<double>& breakpoints) {
  if (!(b > 0.0)) throw PreconditionError("homogenize", "b must be > 0");
  if (!(L > 0.0)) throw PreconditionError("homogenize", "L must be > 0");
  const double g_min = minimize_periodic(G, L);
  if (std::abs(g_min) > 1e-10)
    throw PreconditionError("homogenize", "effective diffusion requires min G = 0, got " +
                                              format_double(g_min));
  const double integral = L * average_periodic(G, L, breakpoints);
  return L * b / (L * b + integral);
}

Eigen::VectorXd fhat_epsilon(const Source2D& f, const ProfileSpec& spec, double eps,
                             const Eigen::VectorXd& grid) {
  Eigen::VectorXd out(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid(i);
    out(i) = section_integral(f, x, -spec.b(x), eval_G_eps(spec, eps, x));
  }
  return out;
}

Eigen::VectorXd fhat_epsilon(const Source2D& f, const CombSpec& spec, double eps,
                             const Eigen::VectorXd& grid) {
  const auto teeth = tooth_layout(spec, eps);
  const double scale = teeth.front().scale;
  const double pitch = spec.cell_width() * scale;
  Eigen::VectorXd out(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid(i);
    double v = section_integral(f, x, -spec.b(x), 0.0);
    const auto k = static_cast<long long>(std::floor(x / pitch));
    if (k >= teeth.front().n && k <= teeth.back().n) {
      const double x1 = (x - k * pitch) / scale;
      for (const Rect& r : spec.cell())
        if (x1 >= r.x_lo && x1 < r.x_hi) v += section_integral(f, x, r.y_lo, r.y_hi);
    }
    out(i) = v;
  }
  return out;
}

Eigen::VectorXd fhat_limit_for_x_only_f(const Function1D& f, const LimitCoefficients& coeffs) {
  Eigen::VectorXd out(coeffs.grid.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = coeffs.c_values(i) * f(coeffs.grid(i));
  return out;
}

double section_measure_residual(const CombSpec& spec, double eps, const Function1D& phi,
                                const std::vector<double>& phi_breaks) {
  const auto teeth = tooth_layout(spec, eps);
  const double scale = teeth.front().scale;
  const double coverage = cell_area(spec) / spec.cell_width();
  // The section measure is piecewise constant with jumps at the scaled
  // rectangle edges; integrate phi exactly enough on each piece.
  std::vector<double> cuts{0.0, 1.0};
  for (const Tooth& t : teeth)
    for (const Rect& r : spec.cell()) cuts.insert(cuts.end(), {t.offset + r.x_lo * scale, t.offset + r.x_hi * scale});
  for (double b : phi_breaks)
    if (b > 0.0 && b < 1.0) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  static const GaussRule<double> rule = gauss_legendre<double>(8);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    if (!(hi > lo)) continue;
    const double m = tooth_section_measure(spec, teeth, 0.5 * (lo + hi)) - coverage;
    total += m * composite_gauss(phi, lo, hi, 1, rule);
  }
  return std::abs(total);
}

void write_coefficients_csv(std::ostream& os, const LimitCoefficients& c) {
  os << "x,a,c,fhat\n";
  for (Eigen::Index i = 0; i < c.grid.size(); ++i) {
    const double fh = c.fhat_values.size() == c.grid.size() ? c.fhat_values(i) : 0.0;
    os << format_double(c.grid(i)) << ',' << format_double(c.a_values(i)) << ','
       << format_double(c.c_values(i)) << ',' << format_double(fh) << '\n';
  }
}

}  // namespace thinhom
