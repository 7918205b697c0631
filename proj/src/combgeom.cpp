#include "thinhom/combgeom.hpp"

#include "thinhom/errors.hpp"
#include "thinhom/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace thinhom {

CombSpec::CombSpec(ScalarFunction1D b, double cell_width, double cell_height,
                   std::vector<Rect> cell, double alpha)
    : b_(std::move(b)), L_(cell_width), height_(cell_height), cell_(std::move(cell)), alpha_(alpha) {
  if (!(alpha_ > 1.0)) throw ConfigError("combgeom", "alpha must be > 1");
  if (!(L_ > 0.0)) throw ConfigError("combgeom", "L must be > 0");
  if (!(height_ > 0.0)) throw ConfigError("combgeom", "G_height must be > 0");
  if (cell_.empty()) throw ConfigError("combgeom", "cell must contain at least one rectangle");
  if (!(b_.range().first > 0.0))
    throw ConfigError("combgeom", "b must be bounded below by a positive constant");
  for (const Rect& r : cell_) {
    if (!(r.x_hi > r.x_lo && r.y_hi > r.y_lo))
      throw ConfigError("combgeom", "cell rectangles must have positive area");
    if (r.x_lo < 0.0 || r.x_hi > L_ || r.y_lo < 0.0 || r.y_hi > height_)
      throw ConfigError("combgeom", "cell rectangle outside [0, L] x [0, G_height]");
  }
  for (std::size_t i = 0; i < cell_.size(); ++i)
    for (std::size_t j = i + 1; j < cell_.size(); ++j) {
      const Rect& a = cell_[i];
      const Rect& c = cell_[j];
      const bool overlap = std::min(a.x_hi, c.x_hi) > std::max(a.x_lo, c.x_lo) &&
                           std::min(a.y_hi, c.y_hi) > std::max(a.y_lo, c.y_lo);
      if (overlap) throw ConfigError("combgeom", "cell rectangles must have disjoint interiors");
    }
  x_min_ = cell_.front().x_lo;
  x_max_ = cell_.front().x_hi;
  for (const Rect& r : cell_) {
    x_min_ = std::min(x_min_, r.x_lo);
    x_max_ = std::max(x_max_, r.x_hi);
  }
}

std::vector<Rect> CombSpec::gamma0_rects() const {
  std::vector<Rect> out;
  for (const Rect& r : cell_)
    if (r.y_lo == 0.0) out.push_back(r);
  return out;
}

double CombSpec::section_length(double x1) const {
  double len = 0.0;
  for (const Rect& r : cell_)
    if (x1 >= r.x_lo && x1 < r.x_hi) len += r.y_hi - r.y_lo;
  return len;
}

std::vector<Tooth> tooth_layout(const CombSpec& spec, double eps) {
  if (!(eps > 0.0)) throw DomainError("combgeom", "epsilon must be > 0");
  const double scale = std::pow(eps, spec.alpha());
  const int n_max = window_count(spec.cell_width() * scale);
  std::vector<Tooth> teeth;
  for (int n = 1; n <= n_max; ++n) {
    const double offset = n * spec.cell_width() * scale;
    if (offset + spec.cell_x_max() * scale > 1.0 + 1e-12) break;
    teeth.push_back({n, offset, scale});
  }
  if (teeth.empty())
    throw ConfigError("combgeom", "no tooth fits in (0, 1): L eps^alpha too large");
  return teeth;
}

double cell_area(const CombSpec& spec) {
  double a = 0.0;
  for (const Rect& r : spec.cell()) a += r.area();
  return a;
}

double tooth_section_measure(const CombSpec& spec, const std::vector<Tooth>& teeth, double x) {
  if (teeth.empty()) return 0.0;
  const double scale = teeth.front().scale;
  const double pitch = spec.cell_width() * scale;
  const auto k = static_cast<long long>(std::floor(x / pitch));
  if (k < teeth.front().n || k > teeth.back().n) return 0.0;
  const double x1 = (x - k * pitch) / scale;
  return spec.section_length(x1);
}

}  // namespace thinhom
