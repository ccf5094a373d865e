#include <cmath>

#include <doctest.h>

#include "crossinf/complex_flows.hpp"

using namespace crossinf;

TEST_CASE("analytic_quad_orbit landmarks") {
  ComplexState z0 = analytic_quad_orbit(0.0, 1.3, -0.7);
  CHECK(z0.x == doctest::Approx(1.3));
  CHECK(z0.y == doctest::Approx(-0.7));

  // real axis is invariant: x0 = 1, t = 0.5 -> x = 1/(1-0.5) = 2
  ComplexState real = analytic_quad_orbit(0.5, 1.0, 0.0);
  CHECK(real.x == doctest::Approx(2.0));
  CHECK(real.y == 0.0);

  ComplexState i1 = analytic_quad_orbit(1.0, 0.0, 1.0);
  CHECK(i1.x == doctest::Approx(-0.5));
  CHECK(i1.y == doctest::Approx(0.5));
}

TEST_CASE("analytic_quad_orbit pole on the real axis") {
  CHECK_THROWS_AS(analytic_quad_orbit(1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("invariant_E values and conservation along the closed form") {
  CHECK(invariant_E({0.0, 1.0}) == doctest::Approx(1.0));
  CHECK(invariant_E({1.0, 1.0}) == doctest::Approx(2.0));
  CHECK(invariant_E({3.0, 1.0}) == doctest::Approx(10.0));
  CHECK_THROWS_AS(invariant_E({1.0, 0.0}), std::domain_error);

  for (double t = -2.0; t <= 2.0; t += 0.05) {
    ComplexState z = analytic_quad_orbit(t, 1.0, 1.0);
    CHECK(std::abs(invariant_E(z) - 2.0) <= 1e-10);
  }
}

TEST_CASE("orbit_geometry radii") {
  OrbitGeometry g01 = orbit_geometry(0.0, 1.0);
  CHECK(g01.R == doctest::Approx(0.5));
  OrbitGeometry g11 = orbit_geometry(1.0, 1.0);
  CHECK(g11.R == doctest::Approx(1.0));
  CHECK(g11.center_y == doctest::Approx(1.0));
  OrbitGeometry degenerate = orbit_geometry(1.0, 0.0);
  CHECK(degenerate.degenerate);
  CHECK(std::isinf(degenerate.R));

  // every closed-form sample lies on the circle
  for (double t = -1.0; t <= 1.0; t += 0.05) {
    ComplexState z = analytic_quad_orbit(t, 1.0, 1.0);
    double res =
        z.x * z.x + (z.y - g11.center_y) * (z.y - g11.center_y) - g11.R * g11.R;
    CHECK(std::abs(res) <= 1e-10);
  }
}

TEST_CASE("numerical quadratic orbit conserves E and stays on its circle") {
  OdeProblem problem;
  problem.rhs = Rhs::complex_quadratic;
  problem.state0 = {1.0, 1.0};
  IntegratorConfig cfg;
  double t_end = 4.0 / 2.0; // 4/(x0^2+y0^2)
  TrajectorySegment seg = integrate_until(
      problem, cfg, [t_end](double t, const State&) { return t - t_end; });
  OrbitGeometry geom = orbit_geometry(1.0, 1.0);
  for (const Sample& s : seg.samples) {
    CHECK(std::abs(invariant_E({s.state[0], s.state[1]}) - geom.E) <= 1e-7);
    double res = s.state[0] * s.state[0] +
                 (s.state[1] - geom.center_y) * (s.state[1] - geom.center_y) -
                 geom.R * geom.R;
    CHECK(std::abs(res) <= 1e-7 * geom.R * geom.R);
  }
}

TEST_CASE("cubic orbit: first-quadrant leaf and derived oracle") {
  OdeProblem problem;
  problem.rhs = Rhs::complex_cubic;
  problem.state0 = {1.0, 1.0};
  TrajectorySegment seg = integrate_until(
      problem, {}, [](double t, const State&) { return t - 5.0; });
  for (const Sample& s : seg.samples) {
    CHECK(s.state[0] >= -1e-12);
    CHECK(s.state[1] >= -1e-12);
    ComplexState ref = analytic_cubic_orbit(s.t, 1.0, 1.0);
    CHECK(std::hypot(s.state[0] - ref.x, s.state[1] - ref.y) <= 1e-7);
  }
}

TEST_CASE("real-axis invariance of both complex systems") {
  for (Rhs rhs : {Rhs::complex_quadratic, Rhs::complex_cubic}) {
    OdeProblem problem;
    problem.rhs = rhs;
    problem.state0 = {0.5, 0.0};
    TrajectorySegment seg = integrate_until(
        problem, {}, [](double t, const State&) { return t - 1.0; });
    for (const Sample& s : seg.samples) CHECK(s.state[1] == 0.0);
  }
}

TEST_CASE("a minuscule imaginary part avoids the quadratic collapse") {
  OdeProblem problem;
  problem.rhs = Rhs::complex_quadratic;
  problem.state0 = {1.0, 1e-6};
  IntegratorConfig cfg;
  cfg.max_steps = 5'000'000;
  TrajectorySegment seg = integrate_until(
      problem, cfg, [](double, const State& s) { return -(s[0] + 0.5); });
  CHECK(seg.termination == Termination::predicate_hit);
  CHECK(seg.samples.back().state[0] <= -0.5 + 1e-9);
}

TEST_CASE("transition_time degree 2 scales like 2/R") {
  IntegratorConfig cfg;
  double R = 100.0;
  double T = transition_time(R, 1e-6 * R, 2, cfg);
  CHECK(T * R >= 1.8);
  CHECK(T * R <= 2.2);
}

TEST_CASE("transition_time degree 3 is eps-insensitive") {
  IntegratorConfig cfg;
  double T1 = transition_time(100.0, 1e-3, 3, cfg);
  double T2 = transition_time(100.0, 5e-4, 3, cfg);
  CHECK(std::abs(T1 - T2) / T1 < 0.01);
}
