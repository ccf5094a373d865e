#include "crossinf/complex_flows.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace crossinf {

ComplexState analytic_quad_orbit(double t, double x0, double y0) {
  if (x0 == 0.0 && y0 == 0.0)
    throw std::invalid_argument("analytic_quad_orbit: origin is a fixed point");
  double m = x0 * x0 + y0 * y0;
  double den = (x0 - t * m) * (x0 - t * m) + y0 * y0;
  if (den == 0.0)
    throw std::domain_error("analytic_quad_orbit: real blowup at t* = 1/x0");
  return {(x0 * m - t * m * m) / den, y0 * m / den};
}

ComplexState analytic_cubic_orbit(double t, double x0, double y0) {
  std::complex<double> z0{x0, y0};
  std::complex<double> inv = 1.0 / (z0 * z0) - 2.0 * t;
  std::complex<double> z = 1.0 / std::sqrt(inv);
  return {z.real(), z.imag()};
}

double invariant_E(const ComplexState& s) {
  if (s.y == 0.0)
    throw std::domain_error("invariant_E: undefined on the real axis");
  return (s.y * s.y + s.x * s.x) / s.y;
}

OrbitGeometry orbit_geometry(double x0, double y0) {
  OrbitGeometry g;
  if (y0 == 0.0) {
    g.degenerate = true;
    g.R = std::numeric_limits<double>::infinity();
    g.center_y = std::numeric_limits<double>::infinity();
    return g;
  }
  g.E = (y0 * y0 + x0 * x0) / y0;
  g.R = (x0 * x0 + y0 * y0) / (2.0 * std::abs(y0));
  g.center_y = y0 > 0 ? g.R : -g.R;
  return g;
}

double transition_time(double R, double eps, int degree,
                       const IntegratorConfig& config) {
  if (!(R > eps) || !(eps > 0.0))
    throw std::invalid_argument("transition_time: requires R >> eps > 0");
  if (degree != 2 && degree != 3)
    throw std::invalid_argument("transition_time: degree must be 2 or 3");

  OdeProblem pr;
  pr.rhs = degree == 2 ? Rhs::complex_quadratic : Rhs::complex_cubic;
  pr.state0 = {R, eps};
  pr.t0 = 0.0;

  StopFn arrived;
  if (degree == 3)
    arrived = [eps](double, const State& s) {
      return eps * std::abs(s[1]) - std::abs(s[0]);
    };
  else
    arrived = [R, eps](double, const State& s) {
      // Re(1/z) decreases at unit rate along this flow, so this predicate has
      // a single root: the return to x = -R(1-eps) after the excursion past
      // infinity.  A predicate on x alone would fire on the outbound plunge.
      double re_inv = s[0] / (s[0] * s[0] + s[1] * s[1]);
      return -re_inv - 1.0 / (R * (1.0 - eps));
    };

  TrajectorySegment seg = integrate_until(pr, config, arrived);
  if (seg.termination != Termination::predicate_hit)
    throw std::runtime_error("transition_time: trajectory failed to arrive within max_steps");
  return seg.samples.back().t;
}

} // namespace crossinf
