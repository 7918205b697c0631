#pragma once

#include <Eigen/Core>

#include <utility>
#include <variant>
#include <vector>

namespace thinhom {

/// Polynomial c0 + c1 x + c2 x^2 + ... on [0, 1].
struct Polynomial {
  std::vector<double> coefficients;
};

/// Samples (x_i, v_i) with strictly increasing abscissae covering [0, 1],
/// interpolated piecewise linearly.
struct Table {
  std::vector<double> x;
  std::vector<double> v;
};

/// A real function on [0, 1], either polynomial or tabulated. Used for the
/// lower boundary b, the profile coefficients and the period map.
class ScalarFunction1D {
 public:
  ScalarFunction1D() : repr_(Polynomial{{0.0}}) {}
  ScalarFunction1D(Polynomial p);
  ScalarFunction1D(Table t);

  static ScalarFunction1D constant(double c) { return Polynomial{{c}}; }

  /// Throws DomainError outside [0, 1].
  double operator()(double x) const;

  bool is_polynomial() const { return std::holds_alternative<Polynomial>(repr_); }
  bool is_constant() const;
  const std::variant<Polynomial, Table>& representation() const { return repr_; }

  /// Min and max over [0, 1] estimated on the given number of uniform
  /// samples plus the table abscissae.
  std::pair<double, double> range(int samples = 4096) const;

 private:
  std::variant<Polynomial, Table> repr_;
};

/// Piecewise-linear interpolation of (x, v) samples. Abscissae must be
/// increasing; values outside are clamped to the end samples.
double interpolate_linear(const Eigen::Ref<const Eigen::VectorXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& v, double at);

}  // namespace thinhom
