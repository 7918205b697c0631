#pragma once

// Separable solution of the anisotropic cell problem
//   -u_xx - eps^-2 u_yy = 0       in (c - a, c + a) x (y0, y0 + H),
//   u = u0                        on the base y = y0,
//   du/dn = 0                     on the rest of the boundary,
// as a cosine series with cosh profiles in y.

#include "thinhom/combgeom.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace thinhom {

using Trace = std::function<double(double)>;

/// Cosine family used to expand the trace.
///   Full   cos(k pi (x - c + a) / (2a)), k >= 1: every Neumann mode.
///   Even   only even k, i.e. cos(n pi (x - c) / a) up to sign.
enum class CellBasis { Full, Even };

struct CellMode {
  int k;               ///< index in the full Neumann family
  double coefficient;  ///< (u0, psi_k) with psi_k orthonormal on the base
  double wavenumber;   ///< k pi / (2a)
  double decay;        ///< eps * wavenumber: decay rate per unit height
};

struct FourierCellSolution {
  double eps = 0.0;
  double alpha = 0.0;  ///< 0 when the cell is not the reference cell Q_eps
  double half_width = 0.0;
  double height = 1.0;
  double center = 0.0;
  double y0 = 0.0;
  double mean = 0.0;
  double trace_norm = 0.0;  ///< ||u0||_{L2} on the base
  std::vector<CellMode> modes;

  double operator()(double x, double y) const;
  /// Normalized orthonormal basis function psi_k at x.
  double basis(int k, double x) const;
  /// cosh(decay (H - y)) / cosh(decay H) evaluated through log-cosh.
  double profile(const CellMode& m, double y) const;
};

/// Mean of u0 over (center - a, center + a) by composite Gauss-Legendre with
/// panel doubling to relative tolerance 1e-12.
double trace_average(const Trace& u0, double half_width, double center = 0.0);

/// Fourier solution on Q_eps = (-eps^alpha, eps^alpha) x (0, 1). At most
/// n_modes modes are computed; modes with |coefficient| < 1e-12 ||u0|| are
/// dropped. Throws ResourceError when n_modes cannot be resolved.
FourierCellSolution fourier_solution(const Trace& u0, double eps, double alpha, int n_modes = 64,
                                     CellBasis basis = CellBasis::Full);

/// Same on an arbitrary rectangle [center - a, center + a] x [y0, y0 + H].
FourierCellSolution fourier_solution_on(const Trace& u0, double eps, double half_width,
                                        double height, double center, double y0, int n_modes = 64,
                                        CellBasis basis = CellBasis::Full);

/// Integral over the cell width of |u(x, y) - mean|^2 for each y.
std::vector<double> decay_profile(const FourierCellSolution& sol, const std::vector<double>& y);

/// ||u_x||^2 + eps^-2 ||u_y||^2 over the cell, in closed form per mode.
double cell_energy(const FourierCellSolution& sol);

/// ||u0'||^2 on the base computed from the retained modes.
double trace_energy(const FourierCellSolution& sol);

/// Test function for the rectangle [x_lo, x_hi] x [y_lo, y_hi]: the cell
/// solution with trace phi on the base.
FourierCellSolution build_test_function_X(const Trace& phi, const Rect& rect, double eps,
                                          int n_modes = 64);

/// CSV "y,decay".
void write_decay_csv(std::ostream& os, const std::vector<double>& y, const std::vector<double>& decay);

}  // namespace thinhom
