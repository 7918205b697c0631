#include "thinhom/function1d.hpp"

#include "thinhom/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace thinhom {

namespace {

constexpr double kDomainSlack = 1e-12;

}  // namespace

ScalarFunction1D::ScalarFunction1D(Polynomial p) : repr_(std::move(p)) {
  auto& c = std::get<Polynomial>(repr_).coefficients;
  if (c.empty()) throw ConfigError("geometry", "polynomial needs at least one coefficient");
  for (double v : c)
    if (!std::isfinite(v)) throw ConfigError("geometry", "polynomial coefficient is not finite");
}

ScalarFunction1D::ScalarFunction1D(Table t) : repr_(std::move(t)) {
  const auto& tab = std::get<Table>(repr_);
  if (tab.x.size() != tab.v.size() || tab.x.size() < 2)
    throw ConfigError("geometry", "table needs at least two (x, v) pairs");
  for (std::size_t i = 0; i < tab.x.size(); ++i) {
    if (!std::isfinite(tab.x[i]) || !std::isfinite(tab.v[i]))
      throw ConfigError("geometry", "table entry is not finite");
    if (i > 0 && !(tab.x[i] > tab.x[i - 1]))
      throw ConfigError("geometry", "table abscissae must be strictly increasing");
  }
  if (tab.x.front() > 0.0 || tab.x.back() < 1.0)
    throw ConfigError("geometry", "table abscissae must cover [0, 1]");
}

double ScalarFunction1D::operator()(double x) const {
  if (!(x >= -kDomainSlack && x <= 1.0 + kDomainSlack))
    throw DomainError("geometry", "x = " + std::to_string(x) + " outside [0, 1]");
  if (const auto* p = std::get_if<Polynomial>(&repr_)) {
    double acc = 0.0;
    for (auto it = p->coefficients.rbegin(); it != p->coefficients.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  const auto& t = std::get<Table>(repr_);
  const auto hi = std::upper_bound(t.x.begin(), t.x.end(), x);
  if (hi == t.x.begin()) return t.v.front();
  if (hi == t.x.end()) return t.v.back();
  const auto i = static_cast<std::size_t>(hi - t.x.begin());
  const double s = (x - t.x[i - 1]) / (t.x[i] - t.x[i - 1]);
  return (1.0 - s) * t.v[i - 1] + s * t.v[i];
}

bool ScalarFunction1D::is_constant() const {
  if (const auto* p = std::get_if<Polynomial>(&repr_))
    return std::all_of(p->coefficients.begin() + 1, p->coefficients.end(),
                       [](double c) { return c == 0.0; });
  const auto& t = std::get<Table>(repr_);
  return std::all_of(t.v.begin(), t.v.end(), [&](double v) { return v == t.v.front(); });
}

std::pair<double, double> ScalarFunction1D::range(int samples) const {
  double lo = (*this)(0.0), hi = lo;
  for (int i = 1; i <= samples; ++i) {
    const double v = (*this)(static_cast<double>(i) / samples);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (const auto* t = std::get_if<Table>(&repr_)) {
    for (std::size_t i = 0; i < t->x.size(); ++i) {
      if (t->x[i] < 0.0 || t->x[i] > 1.0) continue;
      lo = std::min(lo, t->v[i]);
      hi = std::max(hi, t->v[i]);
    }
  }
  return {lo, hi};
}

double interpolate_linear(const Eigen::Ref<const Eigen::VectorXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& v, double at) {
  const Eigen::Index n = x.size();
  if (at <= x(0)) return v(0);
  if (at >= x(n - 1)) return v(n - 1);
  const auto* begin = x.data();
  const auto* hi = std::upper_bound(begin, begin + n, at);
  const Eigen::Index i = hi - begin;
  const double s = (at - x(i - 1)) / (x(i) - x(i - 1));
  return (1.0 - s) * v(i - 1) + s * v(i);
}

}  // namespace thinhom
