#ifndef CROSSINF_BLOWUP_HPP
#define CROSSINF_BLOWUP_HPP

#include <utility>
#include <vector>

#include "crossinf/ode.hpp"

namespace crossinf {

/// Thrown when the crossing protocol cannot be carried out (step underflow
/// before a fit is accepted, invalid branch policy, ...).
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Branch { real_continuation, imaginary_plus, imaginary_minus };

/// Singular change of variables between the "bad" (original) and "good"
/// (transformed) chart.
struct ChartState {
  Chart chart = Chart::original;
  double q = 1.0; // inverse_power: y = x^q with q = 1 - p (so q < 0)

  double forward(double x) const;  // x -> y
  double backward(double y) const; // y -> x on the real branch
  /// |x| of the back-transformed state; for odd p past the crossing the
  /// state is imaginary and only the magnitude is real.
  double backward_magnitude(double y) const;
};

struct PowerLawFit {
  double p_hat = 0.0;
  double c_hat = 0.0;
  double r_squared = 0.0;
  int window = 0;
  bool accepted = false;
};

struct CrossingRecord {
  double t_star_estimate = 0.0;
  double t_in = 0.0, x_in = 0.0;   // bad -> good switch
  double t_out = 0.0, x_out = 0.0; // good -> bad switch (magnitude for
                                   // imaginary branches)
  Branch branch = Branch::real_continuation;
};

struct ChartedTrajectory {
  std::vector<TrajectorySegment> segments;
};

struct ProtocolOptions {
  double switch_level = 0.0;  // 0 => default: 100 (p=2), 25 (p=3), 100 else
  double return_level = 0.01;
  Branch branch_policy = Branch::imaginary_plus;
  double t_end = 0.0;         // 0 => 2 * t_star_estimate
  int min_window = 8;
  double r2_threshold = 0.999;
};

/// Least-squares fit of log|F| = log c + p log|x| over the window.
/// Window must be sorted by |x| increasing with all x nonzero.
PowerLawFit detect_power_law(const std::vector<std::pair<double, double>>& recent,
                             int min_window, double r2_threshold);

/// Chart and transformed ("good") problem implied by a detected power law.
/// p_hat is snapped to the nearest integer when within 0.02 of it.
std::pair<OdeProblem, ChartState> good_equation_for(const OdeProblem& problem,
                                                    const PowerLawFit& fit);

struct CrossingResult {
  ChartedTrajectory trajectory;
  CrossingRecord record;
  PowerLawFit fit;       // the fit that triggered the switch
  ChartState chart;      // the singular chart used
};

/// The four-step protocol: integrate the bad equation while monitoring for
/// self-similar growth, switch to the good chart at |x| >= switch_level,
/// cross zero, and switch back once |y| >= return_level on the far side.
CrossingResult cross_infinity(const OdeProblem& problem,
                              const IntegratorConfig& config,
                              const ProtocolOptions& options = {});

/// Default switch level per detected exponent (Fig.-2-style thresholds).
double default_switch_level(double p);

} // namespace crossinf

#endif
