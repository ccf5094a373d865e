#include "crossinf/blowup.hpp"

#include <cmath>
#include <limits>

namespace crossinf {

double ChartState::forward(double x) const {
  if (chart == Chart::original) return x;
  if (chart == Chart::inverse_affine) return 1.0 / x;
  return std::pow(x, q);
}

double ChartState::backward(double y) const {
  if (chart == Chart::original) return y;
  if (chart == Chart::inverse_affine) return 1.0 / y;
  return std::pow(y, 1.0 / q);
}

double ChartState::backward_magnitude(double y) const {
  if (chart == Chart::original) return std::abs(y);
  if (chart == Chart::inverse_affine) return 1.0 / std::abs(y);
  return std::pow(std::abs(y), 1.0 / q);
}

double default_switch_level(double p) {
  if (std::abs(p - 3.0) < 1e-9) return 25.0;
  return 100.0;
}

PowerLawFit detect_power_law(const std::vector<std::pair<double, double>>& recent,
                             int min_window, double r2_threshold) {
  PowerLawFit fit;
  fit.window = static_cast<int>(recent.size());
  if (recent.size() < 2) return fit;

  std::vector<double> lx(recent.size()), lf(recent.size());
  for (std::size_t i = 0; i < recent.size(); ++i) {
    if (recent[i].first == 0.0 || recent[i].second == 0.0)
      throw std::invalid_argument("detect_power_law: zero sample in window");
    lx[i] = std::log(std::abs(recent[i].first));
    lf[i] = std::log(std::abs(recent[i].second));
  }
  const double n = static_cast<double>(recent.size());
  double mx = 0, mf = 0;
  for (std::size_t i = 0; i < recent.size(); ++i) { mx += lx[i]; mf += lf[i]; }
  mx /= n;
  mf /= n;
  double sxx = 0, sxf = 0;
  for (std::size_t i = 0; i < recent.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxf += (lx[i] - mx) * (lf[i] - mf);
  }
  if (sxx == 0.0) return fit;
  fit.p_hat = sxf / sxx;
  fit.c_hat = std::exp(mf - fit.p_hat * mx);

  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < recent.size(); ++i) {
    double pred = mf + fit.p_hat * (lx[i] - mx);
    ss_res += (lf[i] - pred) * (lf[i] - pred);
    ss_tot += (lf[i] - mf) * (lf[i] - mf);
  }
  fit.r_squared = (ss_tot == 0.0) ? (ss_res == 0.0 ? 1.0 : 0.0)
                                  : std::max(0.0, 1.0 - ss_res / ss_tot);
  fit.accepted = fit.r_squared >= r2_threshold && fit.window >= min_window;
  return fit;
}

namespace {

double snap_exponent(double p_hat) {
  double r = std::round(p_hat);
  return (std::abs(p_hat - r) <= 0.02) ? r : p_hat;
}

} // namespace

std::pair<OdeProblem, ChartState> good_equation_for(const OdeProblem& problem,
                                                    const PowerLawFit& fit) {
  if (!fit.accepted)
    throw std::invalid_argument("good_equation_for: fit not accepted, refusing to switch");

  if (problem.rhs == Rhs::asymptotic_quadratic) {
    ChartState chart{Chart::inverse_affine, -1.0};
    OdeProblem good;
    good.rhs = Rhs::good_affine;
    good.alpha = -2.0;
    good.beta = -1.0;
    return {good, chart};
  }
  if (problem.rhs != Rhs::power)
    throw std::invalid_argument("good_equation_for: rhs has no catalog transform");

  double p = snap_exponent(fit.p_hat);
  if (!(p > 1.0))
    throw std::invalid_argument("good_equation_for: estimated exponent <= 1, no blowup");

  ChartState chart{Chart::inverse_power, 1.0 - p};
  OdeProblem good;
  good.rhs = Rhs::good_constant;
  good.c = -problem.sign * (p - 1.0); // d/dt x^{1-p} along dx/dt = sign*x^p
  return {good, chart};
}

namespace {

// Monitors accepted samples, keeping a log-spaced window of (x, F(x)) so that
// min_window samples span one decade in |x|.
struct GrowthMonitor {
  const OdeProblem* problem;
  int min_window;
  double r2_threshold;
  double keep_ratio;
  std::vector<std::pair<double, double>> window;
  PowerLawFit fit;

  GrowthMonitor(const OdeProblem& pr, const ProtocolOptions& opt)
      : problem(&pr),
        min_window(opt.min_window),
        r2_threshold(opt.r2_threshold),
        keep_ratio(std::pow(10.0, 1.0 / (opt.min_window - 1))) {}

  void observe(double t, const State& s) {
    double ax = std::abs(s[0]);
    if (ax == 0.0) return;
    if (!window.empty() && ax < std::abs(window.back().first) * keep_ratio) return;
    window.emplace_back(s[0], rhs_eval(*problem, t, s)[0]);
    if (window.size() > static_cast<std::size_t>(min_window))
      window.erase(window.begin());
    double span = std::abs(window.back().first) / std::abs(window.front().first);
    if (window.size() >= static_cast<std::size_t>(min_window) && span >= 9.99)
      fit = detect_power_law(window, min_window, r2_threshold);
  }
};

} // namespace

CrossingResult cross_infinity(const OdeProblem& problem,
                              const IntegratorConfig& config,
                              const ProtocolOptions& options) {
  if (problem.rhs != Rhs::power && problem.rhs != Rhs::asymptotic_quadratic)
    throw std::invalid_argument("cross_infinity: rhs is not a blowup catalog problem");
  problem.validate();
  config.validate();

  double switch_level = options.switch_level > 0.0
                            ? options.switch_level
                            : default_switch_level(problem.rhs == Rhs::power ? problem.p : 2.0);

  CrossingResult result;

  // Step 1: run the bad equation, monitoring growth toward collapse.
  GrowthMonitor monitor(problem, options);
  StopFn stop_bad = [&](double, const State& s) {
    return monitor.fit.accepted ? std::abs(s[0]) - switch_level : -1.0;
  };
  ObserverFn observe = [&](double t, const State& s) { monitor.observe(t, s); };
  TrajectorySegment bad1 = integrate_until(problem, config, stop_bad, observe);
  if (bad1.termination != Termination::predicate_hit) {
    throw ProtocolError(
        bad1.termination == Termination::step_underflow
            ? "cross_infinity: step underflow before switch level was reached "
              "with an accepted fit (integrated into the singularity)"
            : "cross_infinity: max_steps before switch level was reached");
  }
  const Sample& in = bad1.samples.back();

  // Step 2: switch to the good equation by continuity.
  auto [good, chart] = good_equation_for(problem, monitor.fit);
  double y0 = chart.forward(in.state[0]);
  good.state0 = {y0, 0.0};
  good.t0 = in.t;

  const double y_dir = y0 >= 0.0 ? 1.0 : -1.0;
  StopFn stop_good = [&](double, const State& s) {
    return -y_dir * s[0] - options.return_level;
  };
  TrajectorySegment goodseg = integrate_until(good, config, stop_good);
  if (goodseg.termination != Termination::predicate_hit)
    throw ProtocolError("cross_infinity: good equation failed to cross zero");
  goodseg.chart = chart.chart;
  const Sample& out = goodseg.samples.back();

  // Collapse-time estimate from the zero crossing of the good variable.
  double t_star;
  if (good.rhs == Rhs::good_constant) {
    t_star = in.t + std::abs(y0 / good.c);
  } else {
    // y(t) = -beta/alpha + (y0 + beta/alpha) e^{alpha (t - t_in)}
    t_star = in.t + std::log(good.beta / (good.alpha * y0 + good.beta)) / good.alpha;
  }

  // Step 3: transform back and march the original equation forward.
  bool q_even = chart.chart == Chart::inverse_power &&
                std::abs(std::remainder(chart.q, 2.0)) < 1e-12;
  Branch branch = Branch::real_continuation;
  OdeProblem resumed = problem;
  if (q_even) {
    // Odd p: the state re-emerges on an imaginary branch; evolve |x|.
    branch = options.branch_policy;
    if (branch == Branch::real_continuation)
      throw std::invalid_argument(
          "cross_infinity: real_continuation is not a valid branch for odd p");
    double p = 1.0 - chart.q;
    int half = static_cast<int>(std::llround((p - 1.0) / 2.0));
    resumed.p = p;
    resumed.sign = (half % 2 == 0) ? problem.sign : -problem.sign;
    resumed.state0 = {chart.backward_magnitude(out.state[0]), 0.0};
  } else {
    resumed.state0 = {chart.backward(out.state[0]), 0.0};
  }
  resumed.t0 = out.t;

  double t_end = options.t_end > 0.0 ? options.t_end : 2.0 * t_star;
  TrajectorySegment bad2;
  bad2.chart = Chart::original;
  if (t_end > out.t) {
    StopFn stop_time = [&](double t, const State&) { return t - t_end; };
    bad2 = integrate_until(resumed, config, stop_time);
  } else {
    bad2.samples.push_back({out.t, resumed.state0});
    bad2.termination = Termination::predicate_hit;
  }

  result.record = CrossingRecord{t_star, in.t, in.state[0], out.t,
                                 q_even ? resumed.state0[0] : chart.backward(out.state[0]),
                                 branch};
  result.fit = monitor.fit;
  result.chart = chart;
  result.trajectory.segments = {std::move(bad1), std::move(goodseg), std::move(bad2)};
  return result;
}

} // namespace crossinf
