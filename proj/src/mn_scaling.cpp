#include "crossinf/mn_scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crossinf {

BlowupScaling predict_exponents(const ScalingSignature& sig) {
  if (sig.s == 1.0)
    throw std::domain_error("predict_exponents: s = 1 is exponential, not a power law");
  if (sig.a == 0.0)
    throw std::domain_error("predict_exponents: a = 0 is degenerate");
  return {1.0 / (1.0 - sig.s), 1.0 / sig.a};
}

namespace {

// Sum of squared residuals of the linear fit log A = log c + alpha log(t*-t),
// with the fitted slope returned through `slope`.
double loglog_sse(const std::vector<std::pair<double, double>>& series,
                  double t_star, double* slope) {
  const double n = static_cast<double>(series.size());
  double mx = 0, my = 0;
  std::vector<double> lx(series.size()), ly(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    lx[i] = std::log(t_star - series[i].first);
    ly[i] = std::log(series[i].second);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  double a = sxx > 0 ? sxy / sxx : 0.0;
  if (slope) *slope = a;
  double sse = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    double r = ly[i] - (my + a * (lx[i] - mx));
    sse += r * r;
  }
  return sse;
}

} // namespace

ScalingFitResult fit_blowup_scaling(
    const std::vector<std::pair<double, double>>& series) {
  ScalingFitResult out;
  if (series.size() < 4)
    throw std::invalid_argument("fit_blowup_scaling: need at least 4 samples");
  for (auto& [t, a] : series)
    if (!(a > 0.0))
      throw std::invalid_argument("fit_blowup_scaling: amplitudes must be positive");

  // Reject a non-growing tail: the approach to blowup must be monotone at
  // the end of the series.
  std::size_t tail = std::min<std::size_t>(4, series.size());
  for (std::size_t i = series.size() - tail; i + 1 < series.size(); ++i) {
    if (!(series[i + 1].second > series[i].second)) {
      out.rejected = true;
      out.residual = std::numeric_limits<double>::infinity();
      return out;
    }
  }

  const double t_start = series.front().first;
  const double t_end = series.back().first;
  const double span = t_end - t_start;
  double lo = t_end + 1e-9 * span;
  double hi = t_end + 10.0 * span;

  constexpr double phi = 0.6180339887498949; // golden ratio conjugate
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = loglog_sse(series, x1, nullptr);
  double f2 = loglog_sse(series, x2, nullptr);
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * span; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = loglog_sse(series, x1, nullptr);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = loglog_sse(series, x2, nullptr);
    }
  }
  out.t_star_hat = 0.5 * (lo + hi);
  double sse = loglog_sse(series, out.t_star_hat, &out.exponent_hat);
  out.residual = std::sqrt(sse / static_cast<double>(series.size()));
  return out;
}

ParabolaFields parabola_fixture(double t, const std::vector<double>& grid) {
  ParabolaFields out;
  out.v.reserve(grid.size());
  out.w.reserve(grid.size());
  for (double x : grid) {
    double v = x * x + 0.1 - 0.1 * t;
    out.v.push_back(v);
    out.w.push_back(1.0 / v); // +-inf flags the pole nodes
  }
  if (t >= 1.0) {
    double c = std::sqrt(0.1 * (t - 1.0));
    if (c == 0.0)
      out.crossings = {0.0};
    else
      out.crossings = {-c, c};
  }
  return out;
}

double LocalParabola::v(double x, double t, double t_star) const {
  return f0 * std::pow(t_star - t, 2.0 * b_exp) + 0.5 * f2 * (x - x0) * (x - x0);
}

LocalParabola local_parabola_expansion(double a_exp, double b_exp, double f0,
                                       double f2, double x0) {
  return {a_exp, b_exp, f0, f2, x0};
}

double half_max_width(const std::vector<double>& x,
                      const std::vector<double>& values) {
  if (x.size() != values.size() || x.size() < 3)
    throw std::invalid_argument("half_max_width: bad inputs");
  std::size_t peak = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (std::abs(values[i]) > std::abs(values[peak])) peak = i;
  if (peak == 0 || peak + 1 == values.size()) return 0.0;
  double half = 0.5 * std::abs(values[peak]);

  auto interp = [&](std::size_t i, std::size_t j) {
    double vi = std::abs(values[i]), vj = std::abs(values[j]);
    return x[i] + (half - vi) / (vj - vi) * (x[j] - x[i]);
  };
  double left = x.front(), right = x.back();
  for (std::size_t i = peak; i-- > 0;) {
    if (std::abs(values[i]) <= half) {
      left = interp(i, i + 1);
      break;
    }
  }
  for (std::size_t i = peak + 1; i < values.size(); ++i) {
    if (std::abs(values[i]) <= half) {
      right = interp(i - 1, i);
      break;
    }
  }
  return right - left;
}

} // namespace crossinf
