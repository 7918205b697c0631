#pragma once

// Small numerical building blocks shared by the geometry, cell and
// homogenization code: Gauss-Legendre rules, composite quadrature and a
// bracketed golden-section minimizer.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstddef>
#include <numbers>
#include <utility>

namespace thinhom {

/// Gauss-Legendre nodes and weights on [-1, 1].
template <typename Scalar>
struct GaussRule {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;
};

/// Computes the n-point Gauss-Legendre rule by Newton iteration on P_n.
template <typename Scalar = double>
GaussRule<Scalar> gauss_legendre(int n) {
  GaussRule<Scalar> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Scalar z = std::cos(pi * (i + Scalar(0.75)) / (n + Scalar(0.5)));
    Scalar dp = 0;
    for (int it = 0; it < 100; ++it) {
      Scalar p0 = 1, p1 = 0;
      for (int k = 1; k <= n; ++k) {
        const Scalar p2 = p1;
        p1 = p0;
        p0 = ((2 * k - 1) * z * p1 - (k - 1) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1);
      const Scalar dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 4 * std::numeric_limits<Scalar>::epsilon()) break;
    }
    rule.nodes(i) = -z;
    rule.nodes(n - 1 - i) = z;
    const Scalar w = 2 / ((1 - z * z) * dp * dp);
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  return rule;
}

/// Composite Gauss-Legendre quadrature of fn over [lo, hi] with `panels`
/// equal panels.
template <typename Scalar, typename Fn>
Scalar composite_gauss(Fn&& fn, Scalar lo, Scalar hi, std::size_t panels,
                       const GaussRule<Scalar>& rule) {
  const Scalar width = (hi - lo) / static_cast<Scalar>(panels);
  const Scalar half = width / 2;
  Scalar sum = 0;
  for (std::size_t p = 0; p < panels; ++p) {
    const Scalar mid = lo + (static_cast<Scalar>(p) + Scalar(0.5)) * width;
    Scalar panel = 0;
    for (Eigen::Index q = 0; q < rule.nodes.size(); ++q)
      panel += rule.weights(q) * fn(mid + half * rule.nodes(q));
    sum += panel * half;
  }
  return sum;
}

/// Golden-section search for a minimum of fn on [lo, hi]. Returns the
/// abscissa and value of the best point visited.
template <typename Scalar, typename Fn>
std::pair<Scalar, Scalar> golden_section(Fn&& fn, Scalar lo, Scalar hi, Scalar tol) {
  const Scalar inv_phi = (std::sqrt(Scalar(5)) - 1) / 2;
  Scalar a = lo, b = hi;
  Scalar c = b - inv_phi * (b - a);
  Scalar d = a + inv_phi * (b - a);
  Scalar fc = fn(c), fd = fn(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  return fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
}

/// Dense sampling of fn on [lo, hi] followed by golden-section refinement
/// around the best sample. Ties are broken towards the smallest abscissa; the
/// refined point replaces the sample only when it is strictly lower.
template <typename Scalar, typename Fn>
std::pair<Scalar, Scalar> grid_then_golden(Fn&& fn, Scalar lo, Scalar hi, int samples,
                                           Scalar tol) {
  const Scalar step = (hi - lo) / samples;
  Scalar best_x = lo;
  Scalar best_v = fn(lo);
  for (int i = 1; i <= samples; ++i) {
    const Scalar x = i == samples ? hi : lo + i * step;
    const Scalar v = fn(x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  const Scalar a = std::max(lo, best_x - step);
  const Scalar b = std::min(hi, best_x + step);
  if (b > a) {
    auto [x, v] = golden_section(fn, a, b, tol);
    if (v < best_v) return {x, v};
  }
  return {best_x, best_v};
}

}  // namespace thinhom
