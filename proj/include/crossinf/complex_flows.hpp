#ifndef CROSSINF_COMPLEX_FLOWS_HPP
#define CROSSINF_COMPLEX_FLOWS_HPP

#include "crossinf/ode.hpp"

namespace crossinf {

struct ComplexState {
  double x = 0.0; // real part
  double y = 0.0; // imaginary part
};

struct OrbitGeometry {
  double E = 0.0;        // (x^2+y^2)/y, conserved
  double R = 0.0;        // circle radius |E|/2
  double center_y = 0.0; // R * sign(y0)
  bool degenerate = false; // y0 = 0: infinite radius (real axis)
};

/// Closed-form orbit of dz/dt = z^2 from z(0) = x0 + i y0.
ComplexState analytic_quad_orbit(double t, double x0, double y0);

/// Closed-form orbit of dz/dt = z^3 via 1/z^2 = 1/z0^2 - 2t, principal
/// branch. Derived oracle; valid away from the branch cut of the square root.
ComplexState analytic_cubic_orbit(double t, double x0, double y0);

/// Phase-plane invariant E = (y^2 + x^2)/y of dz/dt = z^2.
double invariant_E(const ComplexState& state);

/// Circle geometry x^2 + (y - sign(y0) R)^2 = R^2 traced by the quadratic flow.
OrbitGeometry orbit_geometry(double x0, double y0);

/// Time for the trajectory of dz/dt = z^degree started at (R, eps) to arrive
/// near the imaginary axis (degree 3, |x| <= eps |y|) or near -R (degree 2,
/// x <= -R (1 - eps)). Throws ProtocolError-style runtime_error on timeout.
double transition_time(double R, double eps, int degree,
                       const IntegratorConfig& config);

} // namespace crossinf

#endif
