#ifndef CROSSINF_MN_SCALING_HPP
#define CROSSINF_MN_SCALING_HPP

#include <stdexcept>
#include <utility>
#include <vector>

namespace crossinf {

/// Operator scalings of a dynamically-renormalized evolution: the spatial
/// operator scales as 1/L^a and the nonlinearity as amplitude^s.
struct ScalingSignature {
  double a = 2.0;
  double s = 2.0;
};

struct BlowupScaling {
  double amplitude_exponent = 0.0; // A ~ (t*-t)^{1/(1-s)}
  double width_exponent = 0.0;     // L ~ (t*-t)^{1/a}
};

struct ScalingFitResult {
  double t_star_hat = 0.0;
  double exponent_hat = 0.0;
  double residual = 0.0; // RMS of the log-log fit; +inf when rejected
  bool rejected = false;
};

BlowupScaling predict_exponents(const ScalingSignature& sig);

/// Fit A ~ c (t*-t)^alpha to a (t, amplitude) series: golden-section search
/// for t* over (t_end, t_end + 10 (t_end - t_start)], inner linear
/// least-squares of log A against log(t*-t).
ScalingFitResult fit_blowup_scaling(const std::vector<std::pair<double, double>>& series);

struct ParabolaFields {
  std::vector<double> v;
  std::vector<double> w; // 1/v; +-inf at nodes where v = 0
  std::vector<double> crossings;
};

/// The idealized sinking parabola v(x,t) = x^2 + 0.1 - 0.1 t and w = 1/v;
/// crossing points +-sqrt(0.1 (t-1)) exist for t >= 1.
ParabolaFields parabola_fixture(double t, const std::vector<double>& grid);

/// Quadratic near-tip model v(x,t) = f0 (t*-t)^{2b} + (f2/2)(x-x0)^2 of a
/// self-similar profile around an extremum (f'(x0) = 0).
struct LocalParabola {
  double a_exp = 0.0; // amplitude exponent of the underlying profile
  double b_exp = 0.0; // width exponent
  double f0 = 0.0;    // profile value at the extremum
  double f2 = 0.0;    // second derivative at the extremum
  double x0 = 0.0;

  double v(double x, double t, double t_star) const;
};

LocalParabola local_parabola_expansion(double a_exp, double b_exp, double f0,
                                       double f2, double x0);

/// Full width of |values| at half its maximum around the peak node, with
/// linear interpolation between nodes. Returns 0 if the peak is at an edge.
double half_max_width(const std::vector<double>& x,
                      const std::vector<double>& values);

} // namespace crossinf

#endif
