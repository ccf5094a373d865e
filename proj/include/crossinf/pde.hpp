#ifndef CROSSINF_PDE_HPP
#define CROSSINF_PDE_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crossinf {

struct PdeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform grid on [0, pi] with Neumann boundaries.
struct Grid1D {
  int n_nodes = 257;

  double h() const;
  double x(int i) const;
  void validate() const; // n_nodes >= 33
};

enum class PdeChart { bad_w, good_v };

struct Region {
  int first = 0;
  int last = 0; // inclusive
  PdeChart chart = PdeChart::bad_w;
};

struct Partition {
  std::vector<Region> regions;
  long era_index = 0;

  void validate(int n_nodes) const; // contiguous, non-empty, covering
};

struct PdeParams {
  int n_nodes = 257;
  double dt = 1e-4;
  double w_big = 1e4;
  double r = 1.0;       // the level set crossed by u
  int guard_band = 4;   // buffer dilation, in nodes
  double hysteresis = 0.1; // a node leaves a buffer only below (1-h) w_big
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
};

/// Grid function stored per node in the chart of the region containing it.
struct Field {
  Grid1D grid;
  Partition partition;
  std::vector<double> values;
  double t = 0.0;

  PdeChart chart_at(int node) const;
};

/// Exact solution u = 0.4 e^{-5t} cos(2x) + 1.5 e^{-t} of u_t = u_xx - u;
/// oracle for every PDE test (w = 1/(u-r), v = u-r).
double analytic_u(double x, double t);
/// Time derivative of analytic_u (chain-rule oracle helper).
double analytic_u_t(double x, double t);
/// First touch of the level r=1: unique root of 1.5 e^{-t} - 0.4 e^{-5t} = 1
/// past the maximum of the left-hand side.
double analytic_touch_time();

/// w_t = w_xx - (2/w) w_x^2 + w + r w^2, central differences, mirrored
/// ghost nodes at both physical boundaries. Throws on |w| < 1e-12.
std::vector<double> bad_rhs(const std::vector<double>& w, double h, double r);
/// v_t = v_xx - v - r, same stencil conventions.
std::vector<double> good_rhs(const std::vector<double>& v, double h, double r);

/// w(x,0) = 1/(u(x,0) - r) on a single bad region.
Field initial_field(const PdeParams& params);

struct EraRecord {
  long era = 0;
  double t = 0.0;
  std::vector<Region> regions;
  std::vector<std::pair<double, double>> region_x; // [x_first, x_last]
  double max_abs_w = 0.0;
  std::vector<double> loci;
};

/// One computational era: explicit Euler at interface nodes (supplying
/// Dirichlet data across charts), implicit Euler per region (tridiagonal
/// solve in good regions, damped Newton in bad ones), then repartition.
void step_era(Field& field, const PdeParams& params, EraRecord* record = nullptr);

/// Buffer detection: singular set |w| >= W_big (with hysteresis inside
/// buffers) dilated by guard_band nodes; complement stays in the bad chart.
/// pole_jump, when given, marks nodes whose w passed through infinity during
/// the last era (a sign flip of w in the bad chart: w = 1/(u-r) cannot cross
/// zero, so a flip means the crossing locus swept the node between samples).
Partition compute_partition(const Field& field, const PdeParams& params,
                            const std::vector<char>* pole_jump = nullptr);

/// Install a partition, converting (w = 1/v) the nodes whose chart changed.
void apply_partition(Field& field, const Partition& partition);

/// Linear-interpolated zeros of v inside good regions.
std::vector<double> crossing_locus(const Field& field);

/// max over nodes of |w| with good-chart nodes read through w = 1/v.
double max_abs_w(const Field& field);

/// Field value converted to the requested chart.
double node_value_in(const Field& field, int node, PdeChart chart);

// --- complexified PDE ---------------------------------------------------

struct ComplexField {
  Grid1D grid;
  std::vector<double> a; // real part of w
  std::vector<double> b; // imaginary part of w
  double t = 0.0;
};

/// w(x,0) = 1/(u(x,0) - r) + i epsilon.
ComplexField initial_complex_field(const PdeParams& params, double epsilon);

/// One implicit Euler step of the coupled (a,b) system on the whole grid
/// (no buffers: complexification regularizes), Neumann BCs, damped Newton.
void complex_pde_step(ComplexField& field, double dt, double r,
                      double newton_tol = 1e-10, int newton_max_iter = 50);

/// Coupled right-hand side of the complexified bad equation.
void complex_rhs(const std::vector<double>& a, const std::vector<double>& b,
                 double h, double r, std::vector<double>& fa,
                 std::vector<double>& fb);

/// Closed-form complex solution via the linear good equation: v = c + i d
/// evolves by eigenmode decay (mode k decays as e^{-(k^2+1)t}; the -r
/// forcing shifts c's equilibrium), then a = c/(c^2+d^2), b = -d/(c^2+d^2).
class ComplexReconstruction {
 public:
  ComplexReconstruction(double epsilon, double r, int n_modes = 64);

  std::pair<double, double> cd(double x, double t) const; // (c, d)
  std::pair<double, double> eval(double x, double t) const; // (a, b)

 private:
  double r_;
  std::vector<double> c_modes_; // modes of c0 + r
  std::vector<double> d_modes_;
};

} // namespace crossinf

#endif
