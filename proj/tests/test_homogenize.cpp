#include "support.hpp"

#include "thinhom/errors.hpp"
#include "thinhom/homogenize.hpp"

#include <doctest.h>

#include <algorithm>

#include <cmath>
#include <sstream>

using namespace thinhom;
using oracle::pi;

TEST_SUITE("homogenize") {

TEST_CASE("type I coefficients") {
  const Eigen::VectorXd grid = uniform_grid(11);
  CHECK(grid(0) == 0.0);
  CHECK(grid(10) == 1.0);

  const LimitCoefficients a = coeffs_type1(oracle::shifted_sine(1.0, 2.0, 1.0, 1.0, 1.5), grid);
  CHECK((a.a_values.array() - 2.0).abs().maxCoeff() < 1e-12);
  CHECK((a.c_values.array() - 3.0).abs().maxCoeff() < 1e-10);

  const LimitCoefficients b = coeffs_type1(oracle::shifted_sine(1.0, 1.0, 1.0, 1.0, 1.5), grid);
  CHECK((b.a_values.array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK((b.c_values.array() - 2.0).abs().maxCoeff() < 1e-10);

  const LimitCoefficients c = coeffs_type1(oracle::one_minus_cos(1.0, {0.0, 1.0}, 1.5, {1.0, 0.5}), grid);
  for (int i = 0; i < grid.size(); ++i) {
    CHECK(c.a_values(i) == doctest::Approx(1.0 + 1.5 * grid(i)).epsilon(1e-12));
    CHECK(c.c_values(i) == doctest::Approx(2.0 + 1.5 * grid(i)).epsilon(1e-10));
  }
}

TEST_CASE("p >= b + G0 with equality only for y-independent G") {
  const Eigen::VectorXd grid = uniform_grid(9);
  for (WaveKind k : {WaveKind::Sine, WaveKind::Square, WaveKind::Sawtooth, WaveKind::Triangle}) {
    const ProfileSpec s(ScalarFunction1D::constant(1.0), Waveform(k), ScalarFunction1D(Polynomial{{0.2, 1.0}}),
                        ScalarFunction1D(Polynomial{{0.5, 0.5}}), ScalarFunction1D::constant(1.0), 1.5);
    const LimitCoefficients c = coeffs_type1(s, grid);
    CHECK((c.c_values - c.a_values).minCoeff() > 0.1);
    CHECK(c.a_values.minCoeff() > 0.0);
  }
  const LimitCoefficients flat = coeffs_type1(oracle::shifted_sine(1.0, 0.4, 0.0, 1.0, 1.5), grid);
  CHECK((flat.c_values - flat.a_values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("type II coefficients") {
  const Eigen::VectorXd grid = uniform_grid(5);
  const CombSpec a(ScalarFunction1D::constant(1.0), 3.0, 2.0, {{0.0, 1.0, 0.0, 2.0}}, 1.5);
  const LimitCoefficients ca = coeffs_type2(a, grid);
  CHECK((ca.a_values.array() - 1.0).abs().maxCoeff() == 0.0);
  CHECK((ca.c_values.array() - 5.0 / 3.0).abs().maxCoeff() < 1e-15);

  const CombSpec b(ScalarFunction1D(Polynomial{{1.0, 1.0}}), 1.0, 1.0, {{0.0, 0.3, 0.0, 1.0}, {0.5, 0.8, 0.0, 1.0}}, 1.5);
  const LimitCoefficients cb = coeffs_type2(b, grid);
  for (int i = 0; i < grid.size(); ++i) CHECK(cb.c_values(i) == doctest::Approx(1.6 + grid(i)).epsilon(1e-15));
}

TEST_CASE("effective diffusion of periodic profiles") {
  CHECK(effective_diffusion_periodic(1.0, 1.0, [](double y) { return 1.0 - std::cos(2 * pi * y); }) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(effective_diffusion_periodic(2.0, 1.0, [](double) { return 0.0; }) == 1.0);
  CHECK(effective_diffusion_periodic(1.0, 2 * pi, [](double y) { return 1.0 + std::sin(y); }) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(effective_diffusion_periodic(1.0, 1.0, [](double y) { return 2.0 + std::sin(2 * pi * y); }),
                  PreconditionError);

  // d equals a / c of the general coefficients when min G = 0.
  const LimitCoefficients c = coeffs_type1(oracle::one_minus_cos(1.0, {0.0}, 1.5), uniform_grid(5));
  CHECK(std::abs(c.a_values(2) / c.c_values(2) - 0.5) < 1e-12);
}

TEST_CASE("fhat^eps: section integrals") {
  const Eigen::VectorXd grid = uniform_grid(201);
  const ProfileSpec s = oracle::shifted_sine(1.0, 2.0, 1.0, 1.0, 1.5);
  const double eps = 0.1, a = std::pow(eps, 1.5);
  const Eigen::VectorXd one = fhat_epsilon([](double, double) { return 1.0; }, s, eps, grid);
  for (int i = 0; i < grid.size(); ++i)
    CHECK(one(i) == doctest::Approx(3.0 + std::sin(2 * pi * grid(i) / a)).epsilon(1e-12));

  // f = f(x1): fhat^eps = (b + G_eps) f.
  const Eigen::VectorXd fx = fhat_epsilon([](double x, double) { return std::cos(pi * x); }, s, eps, grid);
  for (int i = 0; i < grid.size(); i += 20)
    CHECK(fx(i) == doctest::Approx((1.0 + eval_G_eps(s, eps, grid(i))) * std::cos(pi * grid(i))).epsilon(1e-12));

  const ProfileSpec sym = oracle::shifted_sine(1.0, 1.0, 0.0, 1.0, 1.5);
  const Eigen::VectorXd odd = fhat_epsilon([](double, double y) { return y; }, sym, eps, grid);
  CHECK(odd.cwiseAbs().maxCoeff() < 1e-14);

  // A polynomial in x2 is integrated exactly.
  const Eigen::VectorXd cube = fhat_epsilon([](double, double y) { return y * y * y; }, sym, eps, grid);
  CHECK((cube.array()).abs().maxCoeff() < 1e-14);
}

TEST_CASE("fhat^eps on comb domains") {
  const CombSpec s(ScalarFunction1D::constant(1.0), 1.0, 1.0, {{0.25, 0.75, 0.0, 1.0}}, 2.0);
  Eigen::VectorXd grid(3);
  grid << 0.005, 0.015, 0.0101;
  const Eigen::VectorXd f = fhat_epsilon([](double, double y) { return 1.0 + y; }, s, 0.1, grid);
  CHECK(f(0) == doctest::Approx(0.5));        // base only: integral of 1 + y over (-1, 0)
  CHECK(f(1) == doctest::Approx(0.5 + 1.5));  // base plus tooth (0, 1)
  CHECK(f(2) == doctest::Approx(0.5));
}

TEST_CASE("limit right-hand side for x-only sources") {
  const Eigen::VectorXd grid = uniform_grid(9);
  LimitCoefficients c = coeffs_type1(oracle::one_minus_cos(1.0, {0.0}, 1.5), grid);
  CHECK((fhat_limit_for_x_only_f([](double) { return 1.0; }, c).array() - 2.0).abs().maxCoeff() < 1e-10);
  const CombSpec comb(ScalarFunction1D::constant(1.0), 3.0, 2.0, {{0.0, 1.0, 0.0, 2.0}}, 1.5);
  const Eigen::VectorXd q = fhat_limit_for_x_only_f([](double x) { return std::cos(pi * x); }, coeffs_type2(comb, grid));
  for (int i = 0; i < grid.size(); ++i) CHECK(q(i) == doctest::Approx(5.0 / 3.0 * std::cos(pi * grid(i))));
}

TEST_CASE("section-measure residual decreases along the ladder") {
  const CombSpec s(ScalarFunction1D::constant(1.0), 1.0, 1.0, {{0.25, 0.75, 0.0, 1.0}}, 1.5);
  for (auto phi : {std::function<double(double)>([](double) { return 1.0; }),
                   std::function<double(double)>([](double x) { return std::cos(pi * x); })}) {
    double prev = INFINITY;
    for (double eps : {0.2, 0.1, 0.05}) {
      const double r = section_measure_residual(s, eps, phi);
      CHECK(r < prev);
      prev = r;
    }
  }
}

TEST_CASE("coefficient sampling is deterministic and exported as CSV") {
  const ProfileSpec s = oracle::one_minus_cos(1.0, {0.0, 1.0}, 1.5);
  const LimitCoefficients a = coeffs_type1(s, uniform_grid(33));
  const LimitCoefficients b = coeffs_type1(s, uniform_grid(33));
  CHECK(a.a_values == b.a_values);
  CHECK(a.c_values == b.c_values);

  LimitCoefficients c = coeffs_type1(oracle::shifted_sine(1.0, 2.0, 1.0, 1.0, 1.5), uniform_grid(3));
  c.fhat_values = fhat_limit_for_x_only_f([](double) { return 1.0; }, c);
  std::ostringstream os;
  write_coefficients_csv(os, c);
  const std::string text = os.str();
  CHECK(text.rfind("x,a,c,fhat\n0,2,3", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}

}  // TEST_SUITE
