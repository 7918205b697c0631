#pragma once

// Type II (comb-like) thin domains: a base strip -b(x) < x2 < 0 carrying an
// eps^alpha-periodic row of teeth, each a horizontally scaled copy of a
// reference cell Q0 built from axis-aligned rectangles.

#include "thinhom/function1d.hpp"

#include <vector>

namespace thinhom {

struct Rect {
  double x_lo, x_hi, y_lo, y_hi;

  double area() const { return (x_hi - x_lo) * (y_hi - y_lo); }
};

class CombSpec {
 public:
  CombSpec(ScalarFunction1D b, double cell_width, double cell_height, std::vector<Rect> cell,
           double alpha);

  double b(double x) const { return b_(x); }
  const ScalarFunction1D& b_function() const { return b_; }
  double cell_width() const { return L_; }
  double cell_height() const { return height_; }
  const std::vector<Rect>& cell() const { return cell_; }
  double alpha() const { return alpha_; }

  /// Horizontal extent of Q0 (min x_lo, max x_hi over the rectangles).
  double cell_x_min() const { return x_min_; }
  double cell_x_max() const { return x_max_; }

  /// Rectangles of Q0 that sit on {x2 = 0}; their bottoms form Gamma0.
  std::vector<Rect> gamma0_rects() const;

  /// Vertical measure of the section {x2 : (x1, x2) in Q0}.
  double section_length(double x1) const;

 private:
  ScalarFunction1D b_;
  double L_;
  double height_;
  std::vector<Rect> cell_;
  double alpha_;
  double x_min_, x_max_;
};

struct Tooth {
  int n;          ///< tooth index, 1-based
  double offset;  ///< n L eps^alpha
  double scale;   ///< eps^alpha
};

/// Placements n = 1..N_eps with N_eps the largest integer such that
/// N_eps L eps^alpha < 1. A tooth whose scaled cell would reach past x = 1 is
/// not placed. Throws ConfigError when no tooth fits.
std::vector<Tooth> tooth_layout(const CombSpec& spec, double eps);

/// |Q0|, the total rectangle area.
double cell_area(const CombSpec& spec);

/// Vertical measure of the teeth above x in the rescaled domain; zero away
/// from the teeth.
double tooth_section_measure(const CombSpec& spec, const std::vector<Tooth>& teeth, double x);

}  // namespace thinhom
