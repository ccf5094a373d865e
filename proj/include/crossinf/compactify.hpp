#ifndef CROSSINF_COMPACTIFY_HPP
#define CROSSINF_COMPACTIFY_HPP

#include <stdexcept>

namespace crossinf {

/// Point on the unit circle produced by a compactification map.
/// Off-orbit inputs yield raw (X, Y); unit_residual() exposes how far the
/// point is from the circle, and the normalize flag divides by sqrt(X^2+Y^2).
struct CirclePoint {
  double X = 0.0;
  double Y = 0.0;
  double unit_residual() const;
};

struct SpherePoint {
  double X = 0.0;
  double Y = 0.0;
  double Z = 0.0;
  double unit_residual() const;
};

/// X = ((t*-t)^a - x) / ((t*-t)^a + x), Y = 2 / ((t*-t)^a + x).
/// a = 1 is the hyperbola/circle map; pass x^2 for the quadratic form.
CirclePoint circle_power(double t, double x, double t_star, double a,
                         bool normalize = false);

/// Same map expressed through the inverse variable y = 1/x, regular where
/// x blows up: X = (s^a y - 1)/(s^a y + 1), Y = 2 y/(s^a y + 1).
CirclePoint circle_power_inverse(double t, double y, double t_star, double a,
                                 bool normalize = false);

/// Exponential-orbit map: (t*-t)^a replaced by e^{sign (t*-t)}.
/// On the exact orbit x = e^{sign (t-t*)}: X = tanh(-sign (t-t*)), Y = sech(t-t*).
CirclePoint circle_exponential(double t, double x, double t_star, int sign,
                               bool normalize = false);

/// Asymptotic map: t*-t replaced by (e^{2(t*-t)} - 1)/2, a = 1.
CirclePoint circle_asymptotic(double t, double x, double t_star,
                              bool normalize = false);

/// Inverse stereographic projection of the complex plane onto the unit sphere.
SpherePoint riemann_sphere(double x, double y);

/// Sphere compactification of a self-similar PDE field value u with
/// normalized profile value f (|f| <= 1, f >= 0) and amplitude exponent r_exp.
SpherePoint pde_sphere(double u, double t, double t_star, double r_exp, double f);

} // namespace crossinf

#endif
