#include <cmath>

#include <doctest.h>

#include "crossinf/ode.hpp"

using namespace crossinf;

TEST_CASE("rhs_eval catalog") {
  OdeProblem power2;
  power2.rhs = Rhs::power;
  power2.p = 2.0;
  power2.sign = +1;
  CHECK(rhs_eval(power2, 0.0, {2.0, 0.0})[0] == doctest::Approx(4.0));

  OdeProblem quad;
  quad.rhs = Rhs::complex_quadratic;
  State z0 = rhs_eval(quad, 0.0, {0.0, 0.0});
  CHECK(z0[0] == 0.0);
  CHECK(z0[1] == 0.0);

  OdeProblem cubic;
  cubic.rhs = Rhs::complex_cubic;
  State zc = rhs_eval(cubic, 0.0, {1.0, 1.0});
  CHECK(zc[0] == doctest::Approx(-2.0)); // x^3 - 3xy^2
  CHECK(zc[1] == doctest::Approx(2.0));  // 3x^2y - y^3

  OdeProblem asym;
  asym.rhs = Rhs::asymptotic_quadratic;
  CHECK(rhs_eval(asym, 0.0, {1.0, 0.0})[0] == doctest::Approx(3.0));
}

TEST_CASE("problem and config validation") {
  OdeProblem bad;
  bad.rhs = Rhs::power;
  bad.p = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  IntegratorConfig cfg;
  cfg.rel_tol = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_steps = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("integrate_until: quadratic blowup stop at x = 100") {
  OdeProblem problem;
  problem.rhs = Rhs::power;
  problem.p = 2.0;
  problem.state0 = {1.0, 0.0};
  IntegratorConfig cfg;
  TrajectorySegment seg = integrate_until(
      problem, cfg, [](double, const State& s) { return s[0] - 100.0; });
  REQUIRE(seg.termination == Termination::predicate_hit);
  const Sample& last = seg.samples.back();
  // x(t) = 1/(1-t) hits 100 at t = 0.99
  CHECK(std::abs(last.state[0] - 100.0) <= cfg.abs_tol);
  CHECK(last.t == doctest::Approx(0.99).epsilon(1e-8));
}

TEST_CASE("integrate_until: exponential hits e at t = 1") {
  OdeProblem problem;
  problem.rhs = Rhs::linear;
  problem.sign = +1;
  problem.state0 = {1.0, 0.0};
  IntegratorConfig cfg;
  TrajectorySegment seg = integrate_until(
      problem, cfg, [](double t, const State&) { return t - 1.0; });
  REQUIRE(seg.termination == Termination::predicate_hit);
  CHECK(seg.samples.back().state[0] ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-9));
}

TEST_CASE("integrate_until: constant-rate descent stops at y = 0.01") {
  OdeProblem problem;
  problem.rhs = Rhs::good_constant;
  problem.c = -1.0;
  problem.state0 = {0.5, 0.0};
  IntegratorConfig cfg;
  TrajectorySegment seg = integrate_until(
      problem, cfg, [](double, const State& s) { return 0.01 - s[0]; });
  REQUIRE(seg.termination == Termination::predicate_hit);
  CHECK(std::abs(seg.samples.back().t - 0.49) <= 1e-10);
}

TEST_CASE("samples strictly increasing in t") {
  OdeProblem problem;
  problem.rhs = Rhs::asymptotic_quadratic;
  problem.state0 = {1.0, 0.0};
  TrajectorySegment seg = integrate_until(
      problem, {}, [](double, const State& s) { return s[0] - 50.0; });
  for (std::size_t i = 1; i < seg.samples.size(); ++i)
    CHECK(seg.samples[i].t > seg.samples[i - 1].t);
}

TEST_CASE("tolerance ladder shrinks terminal error monotonically") {
  OdeProblem problem;
  problem.rhs = Rhs::power;
  problem.p = 2.0;
  problem.state0 = {1.0, 0.0};
  double prev = 1e9;
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    IntegratorConfig cfg;
    cfg.rel_tol = tol;
    cfg.abs_tol = tol * 1e-2;
    TrajectorySegment seg = integrate_until(
        problem, cfg, [](double t, const State&) { return t - 0.9; });
    double err = std::abs(seg.samples.back().state[0] - 10.0); // 1/(1-0.9)
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("bit-identical reruns") {
  OdeProblem problem;
  problem.rhs = Rhs::complex_quadratic;
  problem.state0 = {1.0, 0.5};
  auto stop = [](double t, const State&) { return t - 3.0; };
  TrajectorySegment a = integrate_until(problem, {}, stop);
  TrajectorySegment b = integrate_until(problem, {}, stop);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].t == b.samples[i].t);
    CHECK(a.samples[i].state[0] == b.samples[i].state[0]);
    CHECK(a.samples[i].state[1] == b.samples[i].state[1]);
  }
}

TEST_CASE("step underflow near a singularity without chart switch") {
  OdeProblem problem;
  problem.rhs = Rhs::power;
  problem.p = 2.0;
  problem.state0 = {1.0, 0.0};
  IntegratorConfig cfg;
  cfg.max_steps = 1'000'000;
  TrajectorySegment seg = integrate_until(
      problem, cfg, [](double, const State&) { return -1.0; });
  CHECK(seg.termination == Termination::step_underflow);
  CHECK(seg.samples.back().t < 1.0);
}
