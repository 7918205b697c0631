#include "thinhom/cell.hpp"

#include "thinhom/errors.hpp"
#include "thinhom/io.hpp"
#include "thinhom/numerics.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace thinhom {

namespace {

constexpr int kMaxQuadraturePoints = 1 << 20;

// log(cosh(z)) for z >= 0 without overflow.
double log_cosh(double z) {
  z = std::abs(z);
  return z + std::log1p(std::exp(-2.0 * z)) - std::numbers::ln2;
}

const GaussRule<double>& gauss8() {
  static const GaussRule<double> rule = gauss_legendre<double>(8);
  return rule;
}

}  // namespace

double FourierCellSolution::basis(int k, double x) const {
  return std::cos(k * std::numbers::pi * (x - center + half_width) / (2.0 * half_width)) /
         std::sqrt(half_width);
}

double FourierCellSolution::profile(const CellMode& m, double y) const {
  const double s = y - y0;
  return std::exp(log_cosh(m.decay * (height - s)) - log_cosh(m.decay * height));
}

double FourierCellSolution::operator()(double x, double y) const {
  double v = mean;
  for (const CellMode& m : modes) v += m.coefficient * basis(m.k, x) * profile(m, y);
  return v;
}

double trace_average(const Trace& u0, double half_width, double center) {
  if (!(half_width > 0.0)) throw DomainError("cell", "cell half-width must be > 0");
  const double lo = center - half_width, hi = center + half_width;
  std::size_t panels = 16;
  double prev = composite_gauss(u0, lo, hi, panels, gauss8());
  double scale = composite_gauss([&](double x) { return std::abs(u0(x)); }, lo, hi, panels, gauss8());
  for (int it = 0; it < 16; ++it) {
    panels *= 2;
    const double next = composite_gauss(u0, lo, hi, panels, gauss8());
    if (std::abs(next - prev) <= 1e-12 * std::max(std::abs(next), scale)) return next / (2.0 * half_width);
    prev = next;
  }
  return prev / (2.0 * half_width);
}

FourierCellSolution fourier_solution_on(const Trace& u0, double eps, double half_width,
                                        double height, double center, double y0, int n_modes,
                                        CellBasis basis) {
  if (!(eps > 0.0)) throw DomainError("cell", "epsilon must be > 0");
  if (!(half_width > 0.0) || !(height > 0.0)) throw DomainError("cell", "degenerate cell");
  if (n_modes < 1) throw ConfigError("cell", "n_modes must be >= 1");

  FourierCellSolution sol;
  sol.eps = eps;
  sol.half_width = half_width;
  sol.height = height;
  sol.center = center;
  sol.y0 = y0;
  sol.mean = trace_average(u0, half_width, center);

  // Mode k has k/2 oscillations over the base; 8-point panels, at least two
  // panels per oscillation of the highest mode.
  const std::size_t panels = std::max<std::size_t>(32, 2 * static_cast<std::size_t>(n_modes));
  if (panels * 8 > kMaxQuadraturePoints)
    throw ResourceError("cell", "n_modes = " + std::to_string(n_modes) +
                                    " cannot be resolved by the trace quadrature");
  const double lo = center - half_width;
  const double width = 2.0 * half_width / static_cast<double>(panels);
  const auto& rule = gauss8();
  std::vector<double> xs, ws, us;
  xs.reserve(panels * 8);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * width;
    for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
      xs.push_back(mid + 0.5 * width * rule.nodes(q));
      ws.push_back(0.5 * width * rule.weights(q));
      us.push_back(u0(xs.back()));
    }
  }
  double norm2 = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) norm2 += ws[i] * us[i] * us[i];
  sol.trace_norm = std::sqrt(norm2);

  const double cutoff = 1e-12 * sol.trace_norm;
  for (int k = 1; k <= n_modes; ++k) {
    if (basis == CellBasis::Even && k % 2 != 0) continue;
    double c = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) c += ws[i] * us[i] * sol.basis(k, xs[i]);
    if (!(std::abs(c) >= cutoff) || c == 0.0) continue;
    const double kx = k * std::numbers::pi / (2.0 * half_width);
    sol.modes.push_back({k, c, kx, eps * kx});
  }
  return sol;
}

FourierCellSolution fourier_solution(const Trace& u0, double eps, double alpha, int n_modes,
                                     CellBasis basis) {
  if (!(alpha > 1.0)) throw ConfigError("cell", "alpha must be > 1");
  FourierCellSolution sol =
      fourier_solution_on(u0, eps, std::pow(eps, alpha), 1.0, 0.0, 0.0, n_modes, basis);
  sol.alpha = alpha;
  return sol;
}

std::vector<double> decay_profile(const FourierCellSolution& sol, const std::vector<double>& y) {
  std::vector<double> out;
  out.reserve(y.size());
  for (double yy : y) {
    if (yy < sol.y0 - 1e-12 || yy > sol.y0 + sol.height + 1e-12)
      throw DomainError("cell", "decay profile height outside the cell");
    double s = 0.0;
    for (const CellMode& m : sol.modes) {
      const double g = sol.profile(m, yy);
      s += m.coefficient * m.coefficient * g * g;
    }
    out.push_back(s);
  }
  return out;
}

double cell_energy(const FourierCellSolution& sol) {
  // Mode k contributes c^2 kx^2 * integral of cosh(2r(H - y)) / cosh^2(rH) dy
  // = c^2 kx tanh(rH) / eps, with r = eps kx; cross terms vanish.
  double e = 0.0;
  for (const CellMode& m : sol.modes)
    e += m.coefficient * m.coefficient * m.wavenumber * std::tanh(m.decay * sol.height) / sol.eps;
  return e;
}

double trace_energy(const FourierCellSolution& sol) {
  double e = 0.0;
  for (const CellMode& m : sol.modes) e += m.coefficient * m.coefficient * m.wavenumber * m.wavenumber;
  return e;
}

FourierCellSolution build_test_function_X(const Trace& phi, const Rect& rect, double eps,
                                          int n_modes) {
  if (!(rect.x_hi > rect.x_lo) || !(rect.y_hi > rect.y_lo))
    throw DomainError("cell", "degenerate rectangle");
  return fourier_solution_on(phi, eps, 0.5 * (rect.x_hi - rect.x_lo), rect.y_hi - rect.y_lo,
                             0.5 * (rect.x_lo + rect.x_hi), rect.y_lo, n_modes);
}

void write_decay_csv(std::ostream& os, const std::vector<double>& y, const std::vector<double>& decay) {
  os << "y,decay\n";
  for (std::size_t i = 0; i < y.size(); ++i) os << format_double(y[i]) << ',' << format_double(decay[i]) << '\n';
}

}  // namespace thinhom
