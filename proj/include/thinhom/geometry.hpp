#pragma once

// Type I (graph-bounded) thin domains: lower boundary -b(x), oscillating
// upper boundary G(x, x / eps^alpha) with G periodic in its second argument.

#include "thinhom/function1d.hpp"

#include <functional>
#include <string>
#include <vector>

namespace thinhom {

enum class WaveKind { Sine, Square, Sawtooth, Triangle, Tabulated };

/// Canonical waveform with period 1 and range [0, 1].
///   sine      (1 + sin(2 pi (s + phase))) / 2
///   square    1 on [0, 1/2), 0 on [1/2, 1)
///   sawtooth  frac(s)
///   triangle  1 - |2 frac(s) - 1|
///   tabulated periodic piecewise-linear samples on [0, 1]
/// The phase shifts every kind: w(s) = shape(s + phase).
class Waveform {
 public:
  explicit Waveform(WaveKind kind = WaveKind::Sine, double phase = 0.0);
  /// Tabulated periodic waveform; samples must span [0, 1] with v(0) == v(1)
  /// and values in [0, 1].
  Waveform(Table samples, double phase = 0.0);

  double operator()(double s) const;

  WaveKind kind() const { return kind_; }
  double phase() const { return phase_; }
  const Table& table() const { return table_; }

  /// Points of [0, 1) where the waveform is discontinuous or has a kink.
  std::vector<double> breakpoints() const;

 private:
  WaveKind kind_;
  double phase_;
  Table table_;
};

WaveKind parse_wave_kind(const std::string& name);
std::string to_string(WaveKind kind);

/// G(x, y) = base(x) + amp(x) * waveform(y / l(x)) together with the lower
/// boundary b and the exponent alpha > 1.
class ProfileSpec {
 public:
  ProfileSpec(ScalarFunction1D b, Waveform waveform, ScalarFunction1D base, ScalarFunction1D amp,
              ScalarFunction1D period, double alpha);

  double G(double x, double y) const { return base_(x) + amp_(x) * waveform_(y / period_(x)); }
  double b(double x) const { return b_(x); }
  double period(double x) const { return period_(x); }
  double alpha() const { return alpha_; }

  const ScalarFunction1D& b_function() const { return b_; }
  const ScalarFunction1D& base() const { return base_; }
  const ScalarFunction1D& amp() const { return amp_; }
  const ScalarFunction1D& period_map() const { return period_; }
  const Waveform& waveform() const { return waveform_; }

  /// Profile bounds: 0 < b0 <= b <= b1, 0 < l_min <= l <= l_max, G <= G1.
  double b0() const { return b0_; }
  double b1() const { return b1_; }
  double l_min() const { return l_min_; }
  double l_max() const { return l_max_; }
  double G1() const { return G1_; }

  /// True when amp == 0, i.e. the upper boundary does not oscillate.
  bool flat() const { return amp_.is_constant() && amp_(0.0) == 0.0; }

  /// Same spec with a different exponent.
  ProfileSpec with_alpha(double alpha) const;

 private:
  ScalarFunction1D b_;
  Waveform waveform_;
  ScalarFunction1D base_;
  ScalarFunction1D amp_;
  ScalarFunction1D period_;
  double alpha_;
  double b0_, b1_, l_min_, l_max_, G1_;
};

/// Piecewise-constant function on a partition of [0, 1]. Value k applies on
/// [breakpoints[k], breakpoints[k+1]); the last interval is closed.
struct StepFunction {
  std::vector<double> breakpoints;
  std::vector<double> values;

  double operator()(double x) const;
};

/// Partition gamma_0 = 0 <= gamma_1 <= ... <= gamma_{N+1} = 1 of the unit
/// interval built from the per-window minimizers of G_eps.
struct Partition {
  double window = 0.0;           ///< L eps^alpha
  std::vector<double> points;    ///< gamma_0 .. gamma_{N+1}
  std::vector<double> minima;    ///< G_{n,eps} for n = 1..N (index n-1)

  int count() const { return static_cast<int>(minima.size()); }
};

/// G_eps(x) = G(x, x / eps^alpha).
double eval_G_eps(const ProfileSpec& spec, double eps, double x);

/// G0(x) = min over one period of y -> G(x, y).
double min_over_period(const ProfileSpec& spec, double x);

/// (1 / l(x)) times the integral of G(x, .) over one period.
double cell_average(const ProfileSpec& spec, double x);

/// Minimum of a periodic function over one period by dense sampling and
/// golden-section refinement.
double minimize_periodic(const std::function<double(double)>& fn, double period);

/// Mean over one period by composite Gauss-Legendre quadrature, doubling the
/// panel count until the relative change falls below 1e-10.
double average_periodic(const std::function<double(double)>& fn, double period,
                        const std::vector<double>& breakpoints = {});

/// Largest N with N * window < 1.
int window_count(double window);

Partition build_partition(const ProfileSpec& spec, double eps);

StepFunction build_step_minorant(const ProfileSpec& spec, double eps);

/// max over a uniform sample grid of |G0(x) - minorant(x)|. The grid has at
/// least `samples` points and at least 16 points per window.
double step_minorant_sup_distance(const ProfileSpec& spec, double eps, int samples = 20001);

/// |integral over (0,1) of (G_eps(x) - cell_average(x)) phi(x) dx|.
/// `phi_breaks` lists interior points where phi jumps, so that quadrature
/// panels do not straddle them.
double weak_star_residual(const ProfileSpec& spec, double eps,
                          const std::function<double(double)>& phi,
                          const std::vector<double>& phi_breaks = {});

}  // namespace thinhom
