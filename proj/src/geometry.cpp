#include "thinhom/geometry.hpp"

#include "thinhom/errors.hpp"
#include "thinhom/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace thinhom {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double frac(double s) { return s - std::floor(s); }

const GaussRule<double>& gauss5() {
  static const GaussRule<double> rule = gauss_legendre<double>(5);
  return rule;
}

}  // namespace

Waveform::Waveform(WaveKind kind, double phase) : kind_(kind), phase_(phase) {
  if (kind == WaveKind::Tabulated)
    throw ConfigError("geometry", "tabulated waveform needs samples");
  if (!std::isfinite(phase)) throw ConfigError("geometry", "waveform phase is not finite");
}

Waveform::Waveform(Table samples, double phase)
    : kind_(WaveKind::Tabulated), phase_(phase), table_(std::move(samples)) {
  const auto& t = table_;
  if (t.x.size() != t.v.size() || t.x.size() < 2)
    throw ConfigError("geometry", "tabulated waveform needs at least two samples");
  if (t.x.front() != 0.0 || t.x.back() != 1.0)
    throw ConfigError("geometry", "tabulated waveform must be sampled on [0, 1]");
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    if (i > 0 && !(t.x[i] > t.x[i - 1]))
      throw ConfigError("geometry", "tabulated waveform abscissae must be strictly increasing");
    if (!(t.v[i] >= 0.0 && t.v[i] <= 1.0))
      throw ConfigError("geometry", "tabulated waveform values must lie in [0, 1]");
  }
  if (t.v.front() != t.v.back())
    throw ConfigError("geometry", "tabulated waveform must be periodic (v(0) == v(1))");
}

double Waveform::operator()(double s) const {
  const double t = frac(s + phase_);
  switch (kind_) {
    case WaveKind::Sine:
      return 0.5 * (1.0 + std::sin(kTwoPi * t));
    case WaveKind::Square:
      return t < 0.5 ? 1.0 : 0.0;
    case WaveKind::Sawtooth:
      return t;
    case WaveKind::Triangle:
      return 1.0 - std::abs(2.0 * t - 1.0);
    case WaveKind::Tabulated: {
      const auto hi = std::upper_bound(table_.x.begin(), table_.x.end(), t);
      if (hi == table_.x.end()) return table_.v.back();
      const auto i = static_cast<std::size_t>(hi - table_.x.begin());
      const double w = (t - table_.x[i - 1]) / (table_.x[i] - table_.x[i - 1]);
      return (1.0 - w) * table_.v[i - 1] + w * table_.v[i];
    }
  }
  return 0.0;
}

std::vector<double> Waveform::breakpoints() const {
  std::vector<double> canonical;
  switch (kind_) {
    case WaveKind::Sine:
      break;
    case WaveKind::Square:
    case WaveKind::Triangle:
      canonical = {0.0, 0.5};
      break;
    case WaveKind::Sawtooth:
      canonical = {0.0};
      break;
    case WaveKind::Tabulated:
      canonical.assign(table_.x.begin(), table_.x.end() - 1);
      break;
  }
  std::vector<double> out;
  for (double c : canonical) out.push_back(frac(c - phase_));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

WaveKind parse_wave_kind(const std::string& name) {
  if (name == "sine") return WaveKind::Sine;
  if (name == "square") return WaveKind::Square;
  if (name == "sawtooth") return WaveKind::Sawtooth;
  if (name == "triangle") return WaveKind::Triangle;
  if (name == "tabulated" || name == "tabulated-periodic") return WaveKind::Tabulated;
  throw ConfigError("geometry", "unknown waveform '" + name + "'");
}

std::string to_string(WaveKind kind) {
  switch (kind) {
    case WaveKind::Sine: return "sine";
    case WaveKind::Square: return "square";
    case WaveKind::Sawtooth: return "sawtooth";
    case WaveKind::Triangle: return "triangle";
    case WaveKind::Tabulated: return "tabulated";
  }
  return "?";
}

ProfileSpec::ProfileSpec(ScalarFunction1D b, Waveform waveform, ScalarFunction1D base,
                         ScalarFunction1D amp, ScalarFunction1D period, double alpha)
    : b_(std::move(b)),
      waveform_(std::move(waveform)),
      base_(std::move(base)),
      amp_(std::move(amp)),
      period_(std::move(period)),
      alpha_(alpha) {
  if (!(alpha_ > 1.0)) throw ConfigError("geometry", "alpha must be > 1");
  std::tie(b0_, b1_) = b_.range();
  if (!(b0_ > 0.0)) throw ConfigError("geometry", "b must be bounded below by a positive constant");
  std::tie(l_min_, l_max_) = period_.range();
  if (!(l_min_ > 0.0)) throw ConfigError("geometry", "period map l must be positive");
  const auto [base_lo, base_hi] = base_.range();
  const auto [amp_lo, amp_hi] = amp_.range();
  if (base_lo < 0.0) throw ConfigError("geometry", "base must be >= 0");
  if (amp_lo < 0.0) throw ConfigError("geometry", "amp must be >= 0");
  G1_ = 0.0;
  for (int i = 0; i <= 4096; ++i) {
    const double x = i / 4096.0;
    G1_ = std::max(G1_, base_(x) + amp_(x));
  }
  G1_ = std::max(G1_, base_hi);
  (void)amp_hi;
}

ProfileSpec ProfileSpec::with_alpha(double alpha) const {
  return ProfileSpec(b_, waveform_, base_, amp_, period_, alpha);
}

double StepFunction::operator()(double x) const {
  if (x < breakpoints.front() || x > breakpoints.back())
    throw DomainError("geometry", "step function evaluated outside its partition");
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  auto k = static_cast<std::ptrdiff_t>(it - breakpoints.begin()) - 1;
  k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(values.size()) - 1);
  return values[static_cast<std::size_t>(k)];
}

double eval_G_eps(const ProfileSpec& spec, double eps, double x) {
  if (!(eps > 0.0)) throw DomainError("geometry", "epsilon must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("geometry", "x outside [0, 1]");
  return spec.G(x, x / std::pow(eps, spec.alpha()));
}

double minimize_periodic(const std::function<double(double)>& fn, double period) {
  constexpr int kSamples = 512;
  const double step = period / kSamples;
  int best = 0;
  double best_v = fn(0.0);
  for (int i = 1; i < kSamples; ++i) {
    const double v = fn(i * step);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  // fn is periodic, so the bracket may extend past either end.
  const double centre = best * step;
  const auto [x, v] = golden_section(fn, centre - step, centre + step, 1e-12);
  (void)x;
  return std::min(v, best_v);
}

double average_periodic(const std::function<double(double)>& fn, double period,
                        const std::vector<double>& breakpoints) {
  std::vector<double> cuts{0.0, period};
  for (double b : breakpoints)
    if (b > 0.0 && b < period) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrate = [&](std::size_t panels_per_period) {
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double len = cuts[k + 1] - cuts[k];
      const auto panels = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(panels_per_period * len / period)));
      sum += composite_gauss(fn, cuts[k], cuts[k + 1], panels, gauss5());
    }
    return sum / period;
  };

  std::size_t panels = 256;
  double prev = integrate(panels);
  for (int it = 0; it < 12; ++it) {
    panels *= 2;
    const double next = integrate(panels);
    if (std::abs(next - prev) <= 1e-10 * std::max(std::abs(next), 1e-300)) return next;
    prev = next;
  }
  return prev;
}

double min_over_period(const ProfileSpec& spec, double x) {
  const double l = spec.period(x);
  const double base = spec.base()(x);
  const double amp = spec.amp()(x);
  const auto& w = spec.waveform();
  return minimize_periodic([&](double y) { return base + amp * w(y / l); }, l);
}

double cell_average(const ProfileSpec& spec, double x) {
  const double l = spec.period(x);
  const double base = spec.base()(x);
  const double amp = spec.amp()(x);
  const auto& w = spec.waveform();
  std::vector<double> breaks;
  for (double s : w.breakpoints()) breaks.push_back(s * l);
  return average_periodic([&](double y) { return base + amp * w(y / l); }, l, breaks);
}

int window_count(double window) {
  if (!(window > 0.0)) return 0;
  auto n = static_cast<long long>(std::floor(1.0 / window));
  while (n > 0 && static_cast<double>(n) * window >= 1.0) --n;
  while (static_cast<double>(n + 1) * window < 1.0) ++n;
  return static_cast<int>(n);
}

Partition build_partition(const ProfileSpec& spec, double eps) {
  if (!(eps > 0.0)) throw DomainError("geometry", "epsilon must be > 0");
  Partition p;
  p.window = spec.l_max() * std::pow(eps, spec.alpha());
  const int n_windows = window_count(p.window);
  if (n_windows < 1) throw ConfigError("geometry", "epsilon too large for partition");
  p.points.reserve(n_windows + 2);
  p.minima.reserve(n_windows);
  p.points.push_back(0.0);
  auto g_eps = [&](double x) { return eval_G_eps(spec, eps, x); };
  for (int n = 1; n <= n_windows; ++n) {
    const double lo = (n - 1) * p.window;
    const double hi = n * p.window;
    const auto [x, v] = grid_then_golden(g_eps, lo, hi, 1024, 1e-12);
    p.points.push_back(x);
    p.minima.push_back(v);
  }
  p.points.push_back(1.0);
  return p;
}

StepFunction build_step_minorant(const ProfileSpec& spec, double eps) {
  const Partition p = build_partition(spec, eps);
  const int n = p.count();
  // Interval k is [gamma_k, gamma_{k+1}], k = 0..N.
  std::vector<double> raw(n + 1);
  raw[0] = p.minima[0];
  for (int k = 1; k < n; ++k) raw[k] = std::max(p.minima[k - 1], p.minima[k]);
  raw[n] = p.minima[n - 1];

  StepFunction s;
  s.breakpoints.push_back(0.0);
  for (int k = 0; k <= n; ++k) {
    const double right = p.points[k + 1];
    if (right > s.breakpoints.back()) {
      s.breakpoints.push_back(right);
      s.values.push_back(raw[k]);
    }
  }
  return s;
}

double step_minorant_sup_distance(const ProfileSpec& spec, double eps, int samples) {
  const StepFunction s = build_step_minorant(spec, eps);
  const int windows = static_cast<int>(s.values.size());
  const int n = std::max(samples, 16 * windows + 1);
  double sup = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / (n - 1);
    sup = std::max(sup, std::abs(min_over_period(spec, x) - s(x)));
  }
  return sup;
}

double weak_star_residual(const ProfileSpec& spec, double eps,
                          const std::function<double(double)>& phi,
                          const std::vector<double>& phi_breaks) {
  const double period = spec.l_min() * std::pow(eps, spec.alpha());
  // 5-point panels of a quarter period give 20 points per oscillation.
  const double panel_width = std::min(period / 4.0, 1.0 / 64.0);
  std::vector<double> cuts{0.0, 1.0};
  for (double b : phi_breaks)
    if (b > 0.0 && b < 1.0) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrand = [&](double x) {
    return (eval_G_eps(spec, eps, x) - cell_average(spec, x)) * phi(x);
  };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    const auto panels = static_cast<std::size_t>(std::ceil(len / panel_width));
    total += composite_gauss(integrand, cuts[k], cuts[k + 1], panels, gauss5());
  }
  return std::abs(total);
}

}  // namespace thinhom
