#include <cmath>

#include <doctest.h>

#include "crossinf/mn_scaling.hpp"

using namespace crossinf;

TEST_CASE("predict_exponents") {
  BlowupScaling s22 = predict_exponents({2.0, 2.0});
  CHECK(s22.amplitude_exponent == doctest::Approx(-1.0));
  CHECK(s22.width_exponent == doctest::Approx(0.5));

  BlowupScaling s23 = predict_exponents({2.0, 3.0});
  CHECK(s23.amplitude_exponent == doctest::Approx(-0.5));

  CHECK_THROWS_AS(predict_exponents({2.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(predict_exponents({0.0, 2.0}), std::domain_error);
}

TEST_CASE("fit_blowup_scaling: exact power law") {
  std::vector<std::pair<double, double>> series;
  for (int i = 0; i <= 30; ++i) {
    double t = 0.9 + 0.09 * i / 30.0; // [0.9, 0.99]
    series.emplace_back(t, 1.0 / (1.0 - t));
  }
  ScalingFitResult fit = fit_blowup_scaling(series);
  CHECK(!fit.rejected);
  CHECK(std::abs(fit.t_star_hat - 1.0) <= 1e-3);
  CHECK(std::abs(fit.exponent_hat - (-1.0)) <= 0.01);
}

TEST_CASE("fit_blowup_scaling: exponential growth leaves visible residual") {
  std::vector<std::pair<double, double>> series;
  for (int i = 0; i <= 30; ++i) {
    double t = i / 30.0;
    series.emplace_back(t, std::exp(4.0 * t));
  }
  ScalingFitResult fit = fit_blowup_scaling(series);
  CHECK((fit.rejected || fit.residual > 1e-3));
}

TEST_CASE("fit_blowup_scaling: non-monotone tail rejected") {
  std::vector<std::pair<double, double>> series = {
      {0.0, 1.0}, {0.1, 2.0}, {0.2, 4.0}, {0.3, 3.0}, {0.4, 2.0}};
  ScalingFitResult fit = fit_blowup_scaling(series);
  CHECK(fit.rejected);
  CHECK(std::isinf(fit.residual));
}

TEST_CASE("parabola_fixture crossings") {
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(-1.0 + 2.0 * i / 200.0);

  ParabolaFields at0 = parabola_fixture(0.0, grid);
  CHECK(at0.crossings.empty());
  double vmin = 1e9;
  for (double v : at0.v) vmin = std::min(vmin, v);
  CHECK(vmin == doctest::Approx(0.1));

  ParabolaFields at1 = parabola_fixture(1.0, grid);
  REQUIRE(at1.crossings.size() == 1);
  CHECK(at1.crossings[0] == doctest::Approx(0.0));

  ParabolaFields at14 = parabola_fixture(1.4, grid);
  REQUIRE(at14.crossings.size() == 2);
  CHECK(at14.crossings[0] == doctest::Approx(-0.2));
  CHECK(at14.crossings[1] == doctest::Approx(0.2));
}

TEST_CASE("local parabola matches the fixture family") {
  LocalParabola model = local_parabola_expansion(-1.0, 0.5, 0.1, 2.0, 0.0);
  // v(x, t) = 0.1 (t*-t) + x^2 with t* = 1 equals x^2 + 0.1 - 0.1 t
  for (double x : {-0.5, 0.0, 0.3})
    for (double t : {0.0, 0.7, 1.2}) {
      double fixture = x * x + 0.1 - 0.1 * t;
      CHECK(model.v(x, t, 1.0) == doctest::Approx(fixture).epsilon(1e-12));
    }
  CHECK(model.v(0.0, 1.0, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("near-tip w = 1/v series recovers the -1 exponent") {
  std::vector<std::pair<double, double>> series;
  for (int i = 0; i <= 40; ++i) {
    double t = 0.9 + 0.0999 * i / 40.0;
    series.emplace_back(t, 1.0 / (0.1 * (1.0 - t))); // w at the tip
  }
  ScalingFitResult fit = fit_blowup_scaling(series);
  CHECK(!fit.rejected);
  CHECK(std::abs(fit.exponent_hat - (-1.0)) <= 0.05);
}

TEST_CASE("half_max_width with linear interpolation") {
  std::vector<double> x, w;
  double c = 0.04; // w = 1/(x^2 + c): half max at x = +-sqrt(c)
  for (int i = 0; i <= 2000; ++i) {
    double xi = -1.0 + 2.0 * i / 2000.0;
    x.push_back(xi);
    w.push_back(1.0 / (xi * xi + c));
  }
  CHECK(half_max_width(x, w) == doctest::Approx(2.0 * std::sqrt(c)).epsilon(1e-3));
}
