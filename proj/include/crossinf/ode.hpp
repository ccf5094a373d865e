#ifndef CROSSINF_ODE_HPP
#define CROSSINF_ODE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace crossinf {

/// Coordinate chart a trajectory segment is expressed in.
enum class Chart { original, inverse_power, inverse_affine };

enum class Rhs {
  power,                // dx/dt = sign * x^p
  asymptotic_quadratic, // dx/dt = 2x + x^2
  linear,               // dx/dt = sign * x
  complex_quadratic,    // dz/dt = z^2, z = x + iy
  complex_cubic,        // dz/dt = z^3
  good_affine,          // dy/dt = alpha*y + beta
  good_constant         // dy/dt = c
};

/// State vector; dimension 1 or 2 depending on the right-hand side.
using State = std::array<double, 2>;

struct OdeProblem {
  Rhs rhs = Rhs::power;
  double p = 2.0;    // exponent for Rhs::power
  int sign = +1;     // for Rhs::power and Rhs::linear
  double alpha = -2.0, beta = -1.0; // for Rhs::good_affine
  double c = -1.0;   // for Rhs::good_constant
  State state0{1.0, 0.0};
  double t0 = 0.0;

  int dimension() const;
  void validate() const; // throws std::invalid_argument
};

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 1e-6;
  double max_step = 0.1;
  std::int64_t max_steps = 10'000'000;

  void validate() const; // throws std::invalid_argument
};

struct Sample {
  double t;
  State state;
};

enum class Termination { predicate_hit, max_steps, step_underflow };

struct TrajectorySegment {
  Chart chart = Chart::original;
  std::vector<Sample> samples;
  Termination termination = Termination::max_steps;
};

/// Derivative of `problem` at (t, state). Pure.
State rhs_eval(const OdeProblem& problem, double t, const State& state);

/// Event function: the integration stops at the first time where the
/// returned residual becomes >= 0; the event time is refined by bisection
/// on the dense output of the last accepted step until |residual| <= abs_tol.
using StopFn = std::function<double(double, const State&)>;

/// Observer invoked once per accepted step (never during event refinement).
using ObserverFn = std::function<void(double, const State&)>;

/// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) integration until the
/// stop residual crosses zero or a failure termination occurs.
TrajectorySegment integrate_until(const OdeProblem& problem,
                                  const IntegratorConfig& config,
                                  const StopFn& stop,
                                  const ObserverFn& observer = {});

} // namespace crossinf

#endif
