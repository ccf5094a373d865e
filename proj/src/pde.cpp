#include "crossinf/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <lapacke.h>

namespace crossinf {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSingular = 1e-12;
} // namespace

double Grid1D::h() const { return kPi / (n_nodes - 1); }
double Grid1D::x(int i) const { return i * (kPi / (n_nodes - 1)); }
void Grid1D::validate() const {
  if (n_nodes < 33) throw std::invalid_argument("Grid1D: n_nodes must be >= 33");
}

void Partition::validate(int n_nodes) const {
  if (regions.empty()) throw PdeError("partition: empty");
  if (regions.front().first != 0 || regions.back().last != n_nodes - 1)
    throw PdeError("partition: does not cover the grid");
  for (std::size_t k = 0; k < regions.size(); ++k) {
    if (regions[k].first > regions[k].last) throw PdeError("partition: empty region");
    if (k > 0) {
      if (regions[k].first != regions[k - 1].last + 1)
        throw PdeError("partition: regions not contiguous");
      if (regions[k].chart == regions[k - 1].chart)
        throw PdeError("partition: adjacent regions share a chart");
    }
  }
}

PdeChart Field::chart_at(int node) const {
  for (const Region& reg : partition.regions)
    if (node >= reg.first && node <= reg.last) return reg.chart;
  throw PdeError("chart_at: node outside partition");
}

double analytic_u(double x, double t) {
  return 0.4 * std::exp(-5.0 * t) * std::cos(2.0 * x) + 1.5 * std::exp(-t);
}

double analytic_u_t(double x, double t) {
  return -2.0 * std::exp(-5.0 * t) * std::cos(2.0 * x) - 1.5 * std::exp(-t);
}

double analytic_touch_time() {
  // Root of f(t) = 1.5 e^{-t} - 0.4 e^{-5t} - 1 with t past argmax of f.
  auto f = [](double t) {
    return 1.5 * std::exp(-t) - 0.4 * std::exp(-5.0 * t) - 1.0;
  };
  double lo = std::log(4.0 / 3.0) / 4.0; // argmax, f > 0 there
  double hi = 1.0;                       // f(1) < 0
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

inline double bad_point(double wl, double wc, double wr, double h, double r) {
  if (std::abs(wc) < kSingular)
    throw PdeError("bad_rhs: singular denominator (|w| < 1e-12)");
  double wxx = (wl - 2.0 * wc + wr) / (h * h);
  double wx = (wr - wl) / (2.0 * h);
  return wxx - 2.0 / wc * wx * wx + wc + r * wc * wc;
}

inline double good_point(double vl, double vc, double vr, double h, double r) {
  return (vl - 2.0 * vc + vr) / (h * h) - vc - r;
}

} // namespace

std::vector<double> bad_rhs(const std::vector<double>& w, double h, double r) {
  const int n = static_cast<int>(w.size());
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double wl = i > 0 ? w[i - 1] : w[1];
    double wr = i < n - 1 ? w[i + 1] : w[n - 2];
    out[i] = bad_point(wl, w[i], wr, h, r);
  }
  return out;
}

std::vector<double> good_rhs(const std::vector<double>& v, double h, double r) {
  const int n = static_cast<int>(v.size());
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double vl = i > 0 ? v[i - 1] : v[1];
    double vr = i < n - 1 ? v[i + 1] : v[n - 2];
    out[i] = good_point(vl, v[i], vr, h, r);
  }
  return out;
}

Field initial_field(const PdeParams& params) {
  Field f;
  f.grid.n_nodes = params.n_nodes;
  f.grid.validate();
  f.values.resize(params.n_nodes);
  for (int i = 0; i < params.n_nodes; ++i) {
    double v = analytic_u(f.grid.x(i), 0.0) - params.r;
    if (std::abs(v) < kSingular)
      throw PdeError("initial_field: initial data touches the level set");
    f.values[i] = 1.0 / v;
  }
  f.partition.regions = {{0, params.n_nodes - 1, PdeChart::bad_w}};
  f.partition.era_index = 0;
  return f;
}

namespace {

double convert(double value) {
  if (std::abs(value) < kSingular)
    throw PdeError("chart conversion at a pole");
  return 1.0 / value;
}

double value_in_chart(const Field& f, int node, PdeChart target) {
  double v = f.values[node];
  return f.chart_at(node) == target ? v : convert(v);
}

// Thomas algorithm; diag/rhs are overwritten.
void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag,
                       std::vector<double>& sup, std::vector<double>& rhs) {
  const int n = static_cast<int>(diag.size());
  for (int i = 1; i < n; ++i) {
    double m = sub[i] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (int i = n - 2; i >= 0; --i)
    rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

// Implicit Euler on a good region. Unknowns are nodes [lo, hi]; left/right
// describe the closure: Dirichlet (value) at lo-1 / hi+1 or Neumann mirror.
void solve_good_region(std::vector<double>& values, int lo, int hi,
                       bool left_neumann, double left_dirichlet,
                       bool right_neumann, double right_dirichlet,
                       double h, double dt, double r) {
  const int m = hi - lo + 1;
  const double lam = dt / (h * h);
  std::vector<double> sub(m, -lam), diag(m, 1.0 + 2.0 * lam + dt), sup(m, -lam);
  std::vector<double> rhs(m);
  for (int i = 0; i < m; ++i) rhs[i] = values[lo + i] - dt * r;
  if (left_neumann)
    sup[0] = -2.0 * lam;
  else
    rhs[0] += lam * left_dirichlet;
  if (right_neumann)
    sub[m - 1] = -2.0 * lam;
  else
    rhs[m - 1] += lam * right_dirichlet;
  solve_tridiagonal(sub, diag, sup, rhs);
  for (int i = 0; i < m; ++i) values[lo + i] = rhs[i];
}

// Damped Newton for implicit Euler on a bad region.
void solve_bad_region(std::vector<double>& values, int lo, int hi,
                      bool left_neumann, double left_dirichlet,
                      bool right_neumann, double right_dirichlet, double h,
                      const PdeParams& params) {
  const int m = hi - lo + 1;
  const double dt = params.dt, r = params.r;
  std::vector<double> w(values.begin() + lo, values.begin() + lo + m);
  const std::vector<double> w_old = w;

  auto neighbor = [&](const std::vector<double>& u, int i, int side) -> double {
    // side -1: left neighbor of local index i; +1: right neighbor
    int j = i + side;
    if (j >= 0 && j < m) return u[j];
    if (side < 0) return left_neumann ? u[1] : left_dirichlet;
    return right_neumann ? u[m - 2] : right_dirichlet;
  };
  auto residual = [&](const std::vector<double>& u, std::vector<double>& F) {
    for (int i = 0; i < m; ++i)
      F[i] = u[i] - w_old[i] -
             dt * bad_point(neighbor(u, i, -1), u[i], neighbor(u, i, +1), h, r);
  };
  auto norm_inf = [&](const std::vector<double>& F) {
    double s = 0;
    for (double f : F) s = std::max(s, std::abs(f));
    return s;
  };

  std::vector<double> F(m), sub(m), diag(m), sup(m), delta(m), trial(m), Ft(m);
  residual(w, F);
  double fnorm = norm_inf(F);
  for (int iter = 0; iter < params.newton_max_iter; ++iter) {
    if (fnorm <= params.newton_tol) {
      std::copy(w.begin(), w.end(), values.begin() + lo);
      return;
    }
    for (int i = 0; i < m; ++i) {
      double wl = neighbor(w, i, -1), wc = w[i], wr = neighbor(w, i, +1);
      double wx = (wr - wl) / (2.0 * h);
      double d_l = 1.0 / (h * h) + 2.0 * wx / (wc * h);
      double d_r = 1.0 / (h * h) - 2.0 * wx / (wc * h);
      double d_c = -2.0 / (h * h) + 2.0 * wx * wx / (wc * wc) + 1.0 + 2.0 * r * wc;
      sub[i] = -dt * d_l;
      sup[i] = -dt * d_r;
      diag[i] = 1.0 - dt * d_c;
      // Mirrored ghost folds the off-diagonal back into the stencil.
      if (i == 0 && left_neumann) sup[i] = -dt * (d_l + d_r);
      if (i == m - 1 && right_neumann) sub[i] = -dt * (d_l + d_r);
    }
    for (int i = 0; i < m; ++i) delta[i] = -F[i];
    solve_tridiagonal(sub, diag, sup, delta);

    double lambda = 1.0;
    double best = fnorm;
    bool accepted = false;
    for (int half = 0; half <= 8; ++half) {
      for (int i = 0; i < m; ++i) trial[i] = w[i] + lambda * delta[i];
      residual(trial, Ft);
      double fn = norm_inf(Ft);
      if (fn < best) {
        w = trial;
        F = Ft;
        fnorm = fn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted)
      throw PdeError("bad-region Newton: damping exhausted, residual " +
                     std::to_string(fnorm));
  }
  throw PdeError("bad-region Newton: no convergence after " +
                 std::to_string(params.newton_max_iter) +
                 " iterations, residual " + std::to_string(fnorm));
}

} // namespace

Partition compute_partition(const Field& field, const PdeParams& params,
                            const std::vector<char>* pole_jump) {
  const int n = field.grid.n_nodes;
  const double enter = params.w_big;
  const double stay = (1.0 - params.hysteresis) * params.w_big;

  std::vector<char> singular(n, 0);
  for (int i = 0; i < n; ++i) {
    PdeChart chart = field.chart_at(i);
    double aw;
    if (chart == PdeChart::bad_w) {
      aw = std::abs(field.values[i]);
      singular[i] = aw >= enter || (pole_jump && (*pole_jump)[i]);
    } else {
      double v = field.values[i];
      aw = std::abs(v) < kSingular ? std::numeric_limits<double>::infinity()
                                   : 1.0 / std::abs(v);
      // hysteresis: leave the buffer only well below the entry level
      singular[i] = aw >= stay || (pole_jump && (*pole_jump)[i]);
    }
  }
  // A crossing locus (zero of v) between two good nodes is a point where w is
  // infinite, so both flanking nodes belong to the singular set even when the
  // sampled |w| stays below the threshold: the pole can sit between nodes.
  for (const Region& reg : field.partition.regions) {
    if (reg.chart != PdeChart::good_v) continue;
    for (int i = reg.first; i < reg.last; ++i)
      if (field.values[i] * field.values[i + 1] <= 0.0)
        singular[i] = singular[i + 1] = 1;
  }

  // Dilate connected singular components by guard_band nodes and merge.
  std::vector<std::pair<int, int>> buffers;
  for (int i = 0; i < n;) {
    if (!singular[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < n && singular[j + 1]) ++j;
    int lo = std::max(0, i - params.guard_band);
    int hi = std::min(n - 1, j + params.guard_band);
    if (!buffers.empty() && lo <= buffers.back().second + 1)
      buffers.back().second = hi;
    else
      buffers.emplace_back(lo, hi);
    i = j + 1;
  }

  // A bad sliver narrower than the guard band between a buffer and a physical
  // boundary lies in the path of an exiting locus; absorb it so the crossing
  // happens in the (linear) good chart instead of stiffening the bad solve.
  if (!buffers.empty()) {
    if (buffers.front().first <= params.guard_band) buffers.front().first = 0;
    if (buffers.back().second >= n - 1 - params.guard_band)
      buffers.back().second = n - 1;
  }

  // Just after two loci are born the strip between them is uniformly close to
  // the level set (|w| large everywhere) without any single node reaching the
  // entry threshold; solving that strip in the bad chart is stiff and can push
  // a node through w = 0, which the continuum solution never does. Merge
  // neighbouring buffers whose gap is uniformly near-singular.
  auto abs_w_at = [&](int i) {
    double val = field.values[i];
    if (field.chart_at(i) == PdeChart::bad_w) return std::abs(val);
    return std::abs(val) < kSingular ? std::numeric_limits<double>::infinity()
                                     : 1.0 / std::abs(val);
  };
  const double near_singular = params.w_big / 100.0;
  for (std::size_t k = 0; k + 1 < buffers.size();) {
    bool gap_singular = true;
    for (int i = buffers[k].second + 1; i < buffers[k + 1].first; ++i)
      if (abs_w_at(i) < near_singular) {
        gap_singular = false;
        break;
      }
    if (gap_singular) {
      buffers[k].second = buffers[k + 1].second;
      buffers.erase(buffers.begin() + static_cast<std::ptrdiff_t>(k) + 1);
    } else {
      ++k;
    }
  }

  for (auto& [lo, hi] : buffers)
    if (3 * (hi - lo + 1) > 2 * n)
      throw PdeError("repartition: buffer spans more than 2/3 of the domain; "
                     "incomplete blowup suspected");

  Partition part;
  part.era_index = field.partition.era_index;
  int cursor = 0;
  for (auto& [lo, hi] : buffers) {
    if (lo > cursor) part.regions.push_back({cursor, lo - 1, PdeChart::bad_w});
    part.regions.push_back({lo, hi, PdeChart::good_v});
    cursor = hi + 1;
  }
  if (cursor <= n - 1) part.regions.push_back({cursor, n - 1, PdeChart::bad_w});
  part.validate(n);
  return part;
}

void apply_partition(Field& field, const Partition& partition) {
  for (const Region& reg : partition.regions)
    for (int i = reg.first; i <= reg.last; ++i)
      if (field.chart_at(i) != reg.chart) field.values[i] = convert(field.values[i]);
  long era = field.partition.era_index;
  field.partition = partition;
  field.partition.era_index = era;
}

std::vector<double> crossing_locus(const Field& field) {
  std::vector<double> loci;
  for (const Region& reg : field.partition.regions) {
    if (reg.chart != PdeChart::good_v) continue;
    for (int i = reg.first; i < reg.last; ++i) {
      double a = field.values[i], b = field.values[i + 1];
      if (a == 0.0)
        loci.push_back(field.grid.x(i));
      else if (a * b < 0.0)
        loci.push_back(field.grid.x(i) +
                       field.grid.h() * (a / (a - b)));
    }
    if (field.values[reg.last] == 0.0) loci.push_back(field.grid.x(reg.last));
  }
  return loci;
}

double max_abs_w(const Field& field) {
  double m = 0.0;
  for (int i = 0; i < field.grid.n_nodes; ++i) {
    double v = field.values[i];
    double aw = field.chart_at(i) == PdeChart::bad_w
                    ? std::abs(v)
                    : (std::abs(v) < kSingular
                           ? std::numeric_limits<double>::infinity()
                           : 1.0 / std::abs(v));
    m = std::max(m, aw);
  }
  return m;
}

double node_value_in(const Field& field, int node, PdeChart chart) {
  return value_in_chart(field, node, chart);
}

void step_era(Field& field, const PdeParams& params, EraRecord* record) {
  const int n = field.grid.n_nodes;
  const double h = field.grid.h();
  field.partition.validate(n);

  std::vector<double> new_values;
  std::vector<char> pole_jump(n, 0);
  std::vector<char> forced(n, 0);
  // Newton failure in a bad region is itself a blowup signal: the implicit
  // system loses its nearby root once dt*|w| approaches the reaction scale.
  // Convert the worst offender to the good chart and retry the era.
  for (int attempt = 0;; ++attempt) {
    const auto& regs = field.partition.regions;

    // (1) explicit forward Euler at the interface nodes, in each node's own
    // chart with cross-chart neighbors converted; these values become the
    // interior Dirichlet data for the implicit solves.
    struct InterfaceUpdate {
      int node;
      double value;
    };
    std::vector<InterfaceUpdate> updates;
    for (std::size_t k = 0; k + 1 < regs.size(); ++k) {
      for (int node : {regs[k].last, regs[k + 1].first}) {
        PdeChart chart = field.chart_at(node);
        double left = node > 0 ? value_in_chart(field, node - 1, chart)
                               : value_in_chart(field, node + 1, chart);
        double right = node < n - 1 ? value_in_chart(field, node + 1, chart)
                                    : value_in_chart(field, node - 1, chart);
        double rate =
            chart == PdeChart::bad_w
                ? bad_point(left, field.values[node], right, h, params.r)
                : good_point(left, field.values[node], right, h, params.r);
        updates.push_back({node, field.values[node] + params.dt * rate});
      }
    }
    new_values = field.values;
    for (const auto& u : updates) new_values[u.node] = u.value;

    // (2) implicit Euler inside every region, Dirichlet at interface nodes.
    const Region* failed = nullptr;
    for (std::size_t k = 0; k < regs.size(); ++k) {
      const Region& reg = regs[k];
      bool left_phys = reg.first == 0;
      bool right_phys = reg.last == n - 1;
      int lo = reg.first + (left_phys ? 0 : 1);
      int hi = reg.last - (right_phys ? 0 : 1);
      if (lo > hi) continue;
      double left_dir = left_phys ? 0.0 : new_values[lo - 1];
      double right_dir = right_phys ? 0.0 : new_values[hi + 1];
      if (reg.chart == PdeChart::good_v) {
        solve_good_region(new_values, lo, hi, left_phys, left_dir, right_phys,
                          right_dir, h, params.dt, params.r);
      } else {
        try {
          solve_bad_region(new_values, lo, hi, left_phys, left_dir, right_phys,
                           right_dir, h, params);
        } catch (const PdeError&) {
          if (attempt >= 8) throw;
          failed = &reg;
          break;
        }
      }
    }
    if (!failed) {
      // Flag bad-chart nodes whose w crossed the pole within the era (the
      // implicit step lands on the post-singularity branch without |w| ever
      // sampling above w_big) so repartition still opens a buffer there.
      for (const Region& reg : regs)
        if (reg.chart == PdeChart::bad_w)
          for (int i = reg.first; i <= reg.last; ++i)
            pole_jump[i] = field.values[i] * new_values[i] < 0.0;
      break;
    }

    double peak = 0.0;
    for (int i = failed->first; i <= failed->last; ++i)
      peak = std::max(peak, std::abs(field.values[i]));
    // Convert the whole stiff flank, not just the peak node: near a moving
    // locus several neighbours sit within a decade of the peak and fail the
    // same way one retry later. Flags accumulate so earlier rescues persist.
    // The floor keeps a shallow-peak failure from converting half the domain.
    double cut = std::max(peak / 10.0, params.w_big / 100.0);
    for (int i = failed->first; i <= failed->last; ++i)
      if (std::abs(field.values[i]) >= cut) forced[i] = 1;
    Partition rescue = compute_partition(field, params, &forced);
    apply_partition(field, rescue);
  }

  field.values = std::move(new_values);
  field.t += params.dt;

  // (3) repartition and begin the next era.
  Partition next = compute_partition(field, params, &pole_jump);
  apply_partition(field, next);
  field.partition.era_index += 1;

  if (record) {
    record->era = field.partition.era_index;
    record->t = field.t;
    record->regions = field.partition.regions;
    record->region_x.clear();
    for (const Region& reg : field.partition.regions)
      record->region_x.emplace_back(field.grid.x(reg.first), field.grid.x(reg.last));
    record->max_abs_w = max_abs_w(field);
    record->loci = crossing_locus(field);
  }
}

// --- complexified PDE -----------------------------------------------------

ComplexField initial_complex_field(const PdeParams& params, double epsilon) {
  ComplexField f;
  f.grid.n_nodes = params.n_nodes;
  f.grid.validate();
  f.a.resize(params.n_nodes);
  f.b.assign(params.n_nodes, epsilon);
  for (int i = 0; i < params.n_nodes; ++i) {
    double v = analytic_u(f.grid.x(i), 0.0) - params.r;
    if (std::abs(v) < kSingular)
      throw PdeError("initial_complex_field: initial data touches the level set");
    f.a[i] = 1.0 / v;
  }
  return f;
}

void complex_rhs(const std::vector<double>& a, const std::vector<double>& b,
                 double h, double r, std::vector<double>& fa,
                 std::vector<double>& fb) {
  const int n = static_cast<int>(a.size());
  fa.resize(n);
  fb.resize(n);
  for (int i = 0; i < n; ++i) {
    int il = i > 0 ? i - 1 : 1;
    int ir = i < n - 1 ? i + 1 : n - 2;
    double mod2 = a[i] * a[i] + b[i] * b[i];
    if (mod2 < 1e-24)
      throw PdeError("complex_rhs: |w|^2 below 1e-24 (field vanished)");
    double axx = (a[il] - 2.0 * a[i] + a[ir]) / (h * h);
    double bxx = (b[il] - 2.0 * b[i] + b[ir]) / (h * h);
    double ax = (a[ir] - a[il]) / (2.0 * h);
    double bx = (b[ir] - b[il]) / (2.0 * h);
    double grad = (ax * ax - bx * bx) / mod2;
    double cross = ax * bx / mod2;
    fa[i] = axx - 2.0 * a[i] * grad - 4.0 * b[i] * cross + a[i] +
            r * (a[i] * a[i] - b[i] * b[i]);
    fb[i] = bxx + 2.0 * b[i] * grad - 4.0 * a[i] * cross + b[i] +
            2.0 * r * a[i] * b[i];
  }
}

namespace {

// Banded storage helpers for LAPACK dgbsv (kl = ku = 3).
struct Banded {
  static constexpr int kl = 3, ku = 3;
  int n;
  int ldab = 2 * kl + ku + 1;
  std::vector<double> ab;
  std::vector<lapack_int> ipiv;

  explicit Banded(int n_) : n(n_), ab(static_cast<std::size_t>(ldab) * n_, 0.0), ipiv(n_) {}
  void reset() { std::fill(ab.begin(), ab.end(), 0.0); }
  double& at(int row, int col) { return ab[kl + ku + row - col + static_cast<std::size_t>(col) * ldab]; }
  void solve(std::vector<double>& rhs) {
    lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, n, kl, ku, 1, ab.data(),
                                    ldab, ipiv.data(), rhs.data(), n);
    if (info != 0) throw PdeError("complex PDE: banded solve failed");
  }
};

} // namespace

void complex_pde_step(ComplexField& field, double dt, double r,
                      double newton_tol, int newton_max_iter) {
  const int n = field.grid.n_nodes;
  const double h = field.grid.h();
  const int N = 2 * n; // unknown ordering a0, b0, a1, b1, ...

  const std::vector<double> a_old = field.a, b_old = field.b;
  std::vector<double> a = field.a, b = field.b;
  std::vector<double> fa(n), fb(n), fa1(n), fb1(n);

  auto residual = [&](const std::vector<double>& aa, const std::vector<double>& bb,
                      std::vector<double>& F) {
    complex_rhs(aa, bb, h, r, fa1, fb1);
    F.resize(N);
    for (int i = 0; i < n; ++i) {
      F[2 * i] = aa[i] - a_old[i] - dt * fa1[i];
      F[2 * i + 1] = bb[i] - b_old[i] - dt * fb1[i];
    }
  };
  auto norm_inf = [](const std::vector<double>& F) {
    double s = 0;
    for (double f : F) s = std::max(s, std::abs(f));
    return s;
  };

  std::vector<double> F(N), Ft(N), rhs(N);
  residual(a, b, F);
  double fnorm = norm_inf(F);
  Banded J(N);
  std::vector<double> ap(n), bp(n), deltas(n);

  for (int iter = 0; iter < newton_max_iter; ++iter) {
    if (fnorm <= newton_tol) {
      field.a = a;
      field.b = b;
      field.t += dt;
      return;
    }
    // Finite-difference Jacobian of the rhs by structural coloring: columns
    // three nodes apart cannot share a row of the tridiagonal stencil.
    J.reset();
    for (int row = 0; row < N; ++row) J.at(row, row) = 1.0;
    complex_rhs(a, b, h, r, fa, fb);
    for (int fieldsel = 0; fieldsel < 2; ++fieldsel) {
      for (int color = 0; color < 3; ++color) {
        ap = a;
        bp = b;
        for (int i = color; i < n; i += 3) {
          double base = fieldsel == 0 ? a[i] : b[i];
          double d = 1e-7 * std::max(std::abs(base), 1.0);
          deltas[i] = d;
          (fieldsel == 0 ? ap[i] : bp[i]) = base + d;
        }
        complex_rhs(ap, bp, h, r, fa1, fb1);
        for (int i = color; i < n; i += 3) {
          int col = 2 * i + fieldsel;
          for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j) {
            double da = (fa1[j] - fa[j]) / deltas[i];
            double db = (fb1[j] - fb[j]) / deltas[i];
            if (std::abs(2 * j - col) <= Banded::kl) J.at(2 * j, col) += -dt * da;
            if (std::abs(2 * j + 1 - col) <= Banded::kl)
              J.at(2 * j + 1, col) += -dt * db;
          }
        }
      }
    }
    for (int k = 0; k < N; ++k) rhs[k] = -F[k];
    J.solve(rhs);

    double lambda = 1.0;
    bool accepted = false;
    for (int half = 0; half <= 8; ++half) {
      ap = a;
      bp = b;
      for (int i = 0; i < n; ++i) {
        ap[i] += lambda * rhs[2 * i];
        bp[i] += lambda * rhs[2 * i + 1];
      }
      residual(ap, bp, Ft);
      double fn = norm_inf(Ft);
      if (fn < fnorm) {
        a = ap;
        b = bp;
        F = Ft;
        fnorm = fn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted)
      throw PdeError("complex PDE Newton: damping exhausted, residual " +
                     std::to_string(fnorm));
  }
  throw PdeError("complex PDE Newton: no convergence, residual " +
                 std::to_string(fnorm));
}

ComplexReconstruction::ComplexReconstruction(double epsilon, double r, int n_modes)
    : r_(r), c_modes_(n_modes + 1, 0.0), d_modes_(n_modes + 1, 0.0) {
  // Project phi0 = c0 + r and d0 onto the Neumann cosine basis on [0, pi].
  const int N = 8192;
  const double dx = kPi / N;
  for (int q = 0; q <= N; ++q) {
    double x = q * dx;
    double weight = (q == 0 || q == N) ? 0.5 : 1.0;
    double a0 = 1.0 / (analytic_u(x, 0.0) - r);
    double mod2 = a0 * a0 + epsilon * epsilon;
    double c0 = a0 / mod2;
    double d0 = -epsilon / mod2;
    for (int k = 0; k <= n_modes; ++k) {
      double basis = std::cos(k * x) * weight * dx * (k == 0 ? 1.0 : 2.0) / kPi;
      c_modes_[k] += (c0 + r) * basis;
      d_modes_[k] += d0 * basis;
    }
  }
}

std::pair<double, double> ComplexReconstruction::cd(double x, double t) const {
  double c = -r_, d = 0.0;
  for (std::size_t k = 0; k < c_modes_.size(); ++k) {
    double decay = std::exp(-(static_cast<double>(k) * k + 1.0) * t);
    double basis = std::cos(k * x);
    c += c_modes_[k] * decay * basis;
    d += d_modes_[k] * decay * basis;
  }
  return {c, d};
}

std::pair<double, double> ComplexReconstruction::eval(double x, double t) const {
  auto [c, d] = cd(x, t);
  double mod2 = c * c + d * d;
  if (mod2 == 0.0)
    throw PdeError("ComplexReconstruction: pole (c^2 + d^2 = 0)");
  return {c / mod2, -d / mod2};
}

} // namespace crossinf
