#include "crossinf/ode.hpp"

#include <cmath>
#include <limits>

namespace crossinf {

int OdeProblem::dimension() const {
  return (rhs == Rhs::complex_quadratic || rhs == Rhs::complex_cubic) ? 2 : 1;
}

void OdeProblem::validate() const {
  if (rhs == Rhs::power && !(p > 1.0))
    throw std::invalid_argument("power rhs requires p > 1 for blowup scenarios");
  if ((rhs == Rhs::power || rhs == Rhs::linear) && sign != 1 && sign != -1)
    throw std::invalid_argument("sign must be +1 or -1");
  if (!std::isfinite(state0[0]) || !std::isfinite(state0[1]) || !std::isfinite(t0))
    throw std::invalid_argument("initial data must be finite");
}

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0))
    throw std::invalid_argument("tolerances must be strictly positive");
  if (!(initial_step > 0) || !(max_step > 0))
    throw std::invalid_argument("steps must be strictly positive");
  if (max_steps < 1)
    throw std::invalid_argument("max_steps must be >= 1");
}

namespace {

// x^p for possibly negative x and integer p; std::pow handles the integer
// case, non-integer p with x < 0 is a domain error surfaced as NaN.
inline double signed_pow(double x, double p) { return std::pow(x, p); }

} // namespace

State rhs_eval(const OdeProblem& problem, double /*t*/, const State& s) {
  switch (problem.rhs) {
    case Rhs::power:
      return {problem.sign * signed_pow(s[0], problem.p), 0.0};
    case Rhs::asymptotic_quadratic:
      return {2.0 * s[0] + s[0] * s[0], 0.0};
    case Rhs::linear:
      return {problem.sign * s[0], 0.0};
    case Rhs::complex_quadratic:
      return {s[0] * s[0] - s[1] * s[1], 2.0 * s[0] * s[1]};
    case Rhs::complex_cubic:
      return {s[0] * s[0] * s[0] - 3.0 * s[0] * s[1] * s[1],
              3.0 * s[0] * s[0] * s[1] - s[1] * s[1] * s[1]};
    case Rhs::good_affine:
      return {problem.alpha * s[0] + problem.beta, 0.0};
    case Rhs::good_constant:
      return {problem.c, 0.0};
  }
  throw std::logic_error("unknown rhs");
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// embedded 4th-order weights
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

struct StepResult {
  State y_new;
  State f_new; // FSAL derivative at the new point
  double err;  // scaled error estimate
};

StepResult dopri_step(const OdeProblem& pr, double t, const State& y,
                      const State& f0, double dt, int dim,
                      const IntegratorConfig& cfg) {
  auto axpy = [dim](const State& y0, double h, std::initializer_list<std::pair<double, const State*>> ks) {
    State r = y0;
    for (auto& [w, k] : ks)
      for (int i = 0; i < dim; ++i) r[i] += h * w * (*k)[i];
    return r;
  };
  State k1 = f0;
  State k2 = rhs_eval(pr, t + c2 * dt, axpy(y, dt, {{a21, &k1}}));
  State k3 = rhs_eval(pr, t + c3 * dt, axpy(y, dt, {{a31, &k1}, {a32, &k2}}));
  State k4 = rhs_eval(pr, t + c4 * dt, axpy(y, dt, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
  State k5 = rhs_eval(pr, t + c5 * dt,
                      axpy(y, dt, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
  State k6 = rhs_eval(pr, t + dt,
                      axpy(y, dt, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
  State y_new = axpy(y, dt, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  State k7 = rhs_eval(pr, t + dt, y_new);
  State y_low = axpy(y, dt, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});

  double err = 0.0;
  for (int i = 0; i < dim; ++i) {
    double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    double e = (y_new[i] - y_low[i]) / sc;
    err += e * e;
  }
  err = std::sqrt(err / dim);
  return {y_new, k7, err};
}

// Cubic Hermite interpolation on the last accepted step.
State hermite(const State& y0, const State& f0, const State& y1,
              const State& f1, double dt, double theta, int dim) {
  State r{0.0, 0.0};
  double h00 = (1 + 2 * theta) * (1 - theta) * (1 - theta);
  double h10 = theta * (1 - theta) * (1 - theta);
  double h01 = theta * theta * (3 - 2 * theta);
  double h11 = theta * theta * (theta - 1);
  for (int i = 0; i < dim; ++i)
    r[i] = h00 * y0[i] + h10 * dt * f0[i] + h01 * y1[i] + h11 * dt * f1[i];
  return r;
}

} // namespace

TrajectorySegment integrate_until(const OdeProblem& problem,
                                  const IntegratorConfig& config,
                                  const StopFn& stop,
                                  const ObserverFn& observer) {
  problem.validate();
  config.validate();
  const int dim = problem.dimension();
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  TrajectorySegment seg;
  seg.termination = Termination::max_steps;

  double t = problem.t0;
  State y = problem.state0;
  State f = rhs_eval(problem, t, y);
  double dt = std::min(config.initial_step, config.max_step);

  seg.samples.push_back({t, y});
  if (observer) observer(t, y);
  double g_prev = stop ? stop(t, y) : -1.0;
  if (stop && g_prev >= 0.0) {
    seg.termination = Termination::predicate_hit;
    return seg;
  }

  for (std::int64_t step = 0; step < config.max_steps; ++step) {
    if (!(dt > 1e3 * kEps * std::max(std::abs(t), 1.0))) {
      seg.termination = Termination::step_underflow;
      return seg;
    }
    StepResult r = dopri_step(problem, t, y, f, dt, dim, config);
    if (!std::isfinite(r.err) || r.err > 1.0) {
      double fac = std::isfinite(r.err) ? std::max(0.2, 0.9 * std::pow(r.err, -0.2)) : 0.2;
      dt *= fac;
      continue;
    }

    double t_new = t + dt;
    double g_new = stop ? stop(t_new, r.y_new) : -1.0;
    if (stop && g_new >= 0.0) {
      // Bisect on the dense output of this step for the first zero of g.
      double lo = 0.0, hi = 1.0;
      double t_ev = t_new;
      State y_ev = r.y_new;
      double g_ev = g_new;
      for (int it = 0; it < 128 && std::abs(g_ev) > config.abs_tol; ++it) {
        double mid = 0.5 * (lo + hi);
        State y_mid = hermite(y, f, r.y_new, r.f_new, dt, mid, dim);
        double g_mid = stop(t + mid * dt, y_mid);
        if (g_mid >= 0.0) {
          hi = mid;
          t_ev = t + mid * dt;
          y_ev = y_mid;
          g_ev = g_mid;
        } else {
          lo = mid;
        }
        if ((hi - lo) * std::abs(dt) < kEps * std::max(std::abs(t_ev), 1.0)) break;
      }
      seg.samples.push_back({t_ev, y_ev});
      if (observer) observer(t_ev, y_ev);
      seg.termination = Termination::predicate_hit;
      return seg;
    }

    t = t_new;
    y = r.y_new;
    f = r.f_new;
    g_prev = g_new;
    seg.samples.push_back({t, y});
    if (observer) observer(t, y);

    double fac = 0.9 * std::pow(std::max(r.err, 1e-10), -0.2);
    dt *= std::min(5.0, std::max(0.2, fac));
    dt = std::min(dt, config.max_step);
  }
  return seg;
}

} // namespace crossinf
