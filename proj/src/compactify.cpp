#include "crossinf/compactify.hpp"

#include <cmath>

namespace crossinf {

double CirclePoint::unit_residual() const { return std::abs(X * X + Y * Y - 1.0); }

double SpherePoint::unit_residual() const {
  return std::abs(X * X + Y * Y + Z * Z - 1.0);
}

namespace {

CirclePoint circle_from(double num, double x, bool normalize) {
  double den = num + x;
  if (den == 0.0)
    throw std::domain_error("compactification pole: denominator is zero");
  CirclePoint p{(num - x) / den, 2.0 / den};
  if (normalize) {
    double n = std::hypot(p.X, p.Y);
    p.X /= n;
    p.Y /= n;
  }
  return p;
}

} // namespace

CirclePoint circle_power(double t, double x, double t_star, double a,
                         bool normalize) {
  return circle_from(std::pow(t_star - t, a), x, normalize);
}

CirclePoint circle_power_inverse(double t, double y, double t_star, double a,
                                 bool normalize) {
  double sa = std::pow(t_star - t, a);
  double den = sa * y + 1.0;
  if (den == 0.0)
    throw std::domain_error("compactification pole: denominator is zero");
  CirclePoint p{(sa * y - 1.0) / den, 2.0 * y / den};
  if (normalize) {
    double n = std::hypot(p.X, p.Y);
    p.X /= n;
    p.Y /= n;
  }
  return p;
}

CirclePoint circle_exponential(double t, double x, double t_star, int sign,
                               bool normalize) {
  return circle_from(std::exp(sign * (t_star - t)), x, normalize);
}

CirclePoint circle_asymptotic(double t, double x, double t_star, bool normalize) {
  return circle_from(0.5 * std::expm1(2.0 * (t_star - t)), x, normalize);
}

SpherePoint riemann_sphere(double x, double y) {
  double d = x * x + y * y + 1.0;
  return {2.0 * x / d, 2.0 * y / d, (x * x + y * y - 1.0) / d};
}

SpherePoint pde_sphere(double u, double t, double t_star, double r_exp, double f) {
  if (std::abs(f) > 1.0)
    throw std::domain_error("pde_sphere: profile value must satisfy |f| <= 1");
  if (f < 0.0)
    throw std::domain_error("pde_sphere: principal branch requires f >= 0");
  double g = std::sqrt(std::max(0.0, 1.0 - f * f));
  double sr = std::pow(t_star - t, r_exp);
  double den = sr + u;
  if (den == 0.0)
    throw std::domain_error("pde_sphere pole: denominator is zero");
  return {g * (sr - u) / den, g * 2.0 * std::sqrt(f) / den, f};
}

} // namespace crossinf
