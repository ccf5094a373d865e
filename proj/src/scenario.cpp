#include "crossinf/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "crossinf/blowup.hpp"
#include "crossinf/compactify.hpp"
#include "crossinf/complex_flows.hpp"
#include "crossinf/mn_scaling.hpp"
#include "crossinf/ode.hpp"
#include "crossinf/pde.hpp"

namespace crossinf {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Typed parameter access over the flat map; remembers touched keys so
/// unknown ones can be rejected after a scenario declares its interface.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& kv) : kv_(kv) {}

  double real(const std::string& key, double def) {
    touched_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    try {
      std::size_t pos = 0;
      double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(it->second);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("parameter '" + key + "': expected a real, got '" +
                        it->second + "'");
    }
  }

  int integer(const std::string& key, int def) {
    touched_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    try {
      std::size_t pos = 0;
      int v = std::stoi(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(it->second);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("parameter '" + key + "': expected an integer, got '" +
                        it->second + "'");
    }
  }

  std::string choice(const std::string& key, const std::string& def,
                     const std::vector<std::string>& allowed) {
    touched_.insert(key);
    auto it = kv_.find(key);
    std::string v = it == kv_.end() ? def : it->second;
    for (const auto& a : allowed)
      if (v == a) return v;
    std::string msg = "parameter '" + key + "': '" + v + "' not in {";
    for (std::size_t i = 0; i < allowed.size(); ++i)
      msg += (i ? ", " : "") + allowed[i];
    throw ConfigError(msg + "}");
  }

  std::vector<double> real_list(const std::string& key,
                                const std::string& def) {
    touched_.insert(key);
    auto it = kv_.find(key);
    std::string raw = it == kv_.end() ? def : it->second;
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ','))
      out.push_back(std::stod(item));
    if (out.empty())
      throw ConfigError("parameter '" + key + "': empty list");
    return out;
  }

  void reject_unknown() const {
    for (const auto& [k, v] : kv_)
      if (!touched_.count(k)) throw ConfigError("unknown parameter '" + k + "'");
  }

 private:
  const std::map<std::string, std::string>& kv_;
  std::set<std::string> touched_;
};

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) {
    out_.open(path);
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i)
      out_ << (i ? "," : "") << header[i];
    out_ << "\r\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << (i ? "," : "") << cells[i];
    out_ << "\r\n";
  }

  void row(const std::vector<double>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << (i ? "," : "") << fmt17(cells[i]);
    out_ << "\r\n";
  }

 private:
  std::ofstream out_;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << "\n";
}

struct RunContext {
  fs::path out_dir;
  json summary;
  std::vector<std::string> artifacts;

  void add_artifact(const std::string& name) { artifacts.push_back(name); }
};

const char* chart_name(Chart c) {
  switch (c) {
    case Chart::original: return "original";
    case Chart::inverse_power: return "inverse_power";
    case Chart::inverse_affine: return "inverse_affine";
  }
  return "?";
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::real_continuation: return "real_continuation";
    case Branch::imaginary_plus: return "imaginary_plus";
    case Branch::imaginary_minus: return "imaginary_minus";
  }
  return "?";
}

// ---------------------------------------------------------------- ode-cross

json run_ode_cross(Params& P, RunContext& ctx) {
  std::string rhs = P.choice("rhs", "power", {"power", "asymptotic"});
  double p = P.real("p", 2.0);
  int sign = P.integer("sign", 1);
  double x0 = P.real("x0", 1.0);
  ProtocolOptions opts;
  opts.switch_level = P.real("switch_level", 0.0);
  opts.return_level = P.real("return_level", 0.01);
  opts.t_end = P.real("t_end", 0.0);
  std::string br = P.choice("branch", "imaginary_plus",
                            {"imaginary_plus", "imaginary_minus", "real"});
  opts.branch_policy = br == "imaginary_plus" ? Branch::imaginary_plus
                       : br == "imaginary_minus" ? Branch::imaginary_minus
                                                 : Branch::real_continuation;
  IntegratorConfig cfg;
  cfg.rel_tol = P.real("rel_tol", 1e-10);
  cfg.abs_tol = P.real("abs_tol", 1e-12);
  P.reject_unknown();

  OdeProblem problem;
  problem.rhs = rhs == "power" ? Rhs::power : Rhs::asymptotic_quadratic;
  problem.p = p;
  problem.sign = sign;
  problem.state0 = {x0, 0.0};
  problem.validate();

  CrossingResult result = cross_infinity(problem, cfg, opts);

  CsvWriter csv(ctx.out_dir / "trajectory.csv",
                {"segment", "chart", "t", "value", "x_equiv"});
  for (std::size_t s = 0; s < result.trajectory.segments.size(); ++s) {
    const auto& seg = result.trajectory.segments[s];
    for (const Sample& smp : seg.samples) {
      double value = smp.state[0];
      double x_equiv = seg.chart == Chart::original
                           ? value
                           : result.chart.backward_magnitude(value);
      csv.row({std::to_string(s), chart_name(seg.chart), fmt17(smp.t),
               fmt17(value), fmt17(x_equiv)});
    }
  }
  ctx.add_artifact("trajectory.csv");

  json results;
  results["t_star_estimate"] = result.record.t_star_estimate;
  results["t_in"] = result.record.t_in;
  results["x_in"] = result.record.x_in;
  results["t_out"] = result.record.t_out;
  results["x_out"] = result.record.x_out;
  results["branch"] = branch_name(result.record.branch);
  results["p_hat"] = result.fit.p_hat;
  results["c_hat"] = result.fit.c_hat;
  results["r_squared"] = result.fit.r_squared;
  results["fit_window"] = result.fit.window;
  ctx.summary["t_star"] = result.record.t_star_estimate;

  json checks;
  checks["fit_accepted"] = result.fit.accepted;
  if (rhs == "power" && sign > 0 && x0 > 0) {
    double t_closed = std::pow(x0, 1.0 - p) / (p - 1.0);
    results["t_star_closed_form"] = t_closed;
    checks["t_star_within_1e-6"] =
        std::abs(result.record.t_star_estimate - t_closed) <= 1e-6;
  } else if (rhs == "asymptotic" && x0 > 0) {
    double t_closed = 0.5 * std::log((x0 + 2.0) / x0);
    results["t_star_closed_form"] = t_closed;
    checks["t_star_within_1e-5"] =
        std::abs(result.record.t_star_estimate - t_closed) <= 1e-5;
  }
  ctx.summary["results"] = results;
  return checks;
}

// -------------------------------------------------------------- ode-complex

json run_ode_complex(Params& P, RunContext& ctx) {
  int degree = P.integer("degree", 2);
  double x0 = P.real("x0", 1.0);
  double y0 = P.real("y0", 1.0);
  double t_end = P.real("t_end", 100.0);
  IntegratorConfig cfg;
  cfg.rel_tol = P.real("rel_tol", 1e-10);
  cfg.abs_tol = P.real("abs_tol", 1e-12);
  cfg.max_step = P.real("max_step", 0.1);
  P.reject_unknown();
  if (degree != 2 && degree != 3) throw ConfigError("degree must be 2 or 3");

  OdeProblem problem;
  problem.rhs = degree == 2 ? Rhs::complex_quadratic : Rhs::complex_cubic;
  problem.state0 = {x0, y0};
  problem.validate();

  TrajectorySegment seg = integrate_until(
      problem, cfg, [t_end](double t, const State&) { return t - t_end; });

  OrbitGeometry geom = degree == 2 ? orbit_geometry(x0, y0) : OrbitGeometry{};
  double e_drift = 0.0, circle_res = 0.0, analytic_err = 0.0;
  CsvWriter csv(ctx.out_dir / "orbit.csv", {"t", "x", "y"});
  for (const Sample& smp : seg.samples) {
    csv.row(std::vector<double>{smp.t, smp.state[0], smp.state[1]});
    if (degree == 2) {
      ComplexState z{smp.state[0], smp.state[1]};
      if (!geom.degenerate) {
        e_drift = std::max(e_drift, std::abs(invariant_E(z) - geom.E));
        double res = z.x * z.x + (z.y - geom.center_y) * (z.y - geom.center_y) -
                     geom.R * geom.R;
        circle_res = std::max(circle_res, std::abs(res));
      }
      ComplexState ref = analytic_quad_orbit(smp.t, x0, y0);
      analytic_err = std::max(analytic_err, std::hypot(z.x - ref.x, z.y - ref.y));
    } else {
      ComplexState ref = analytic_cubic_orbit(smp.t, x0, y0);
      analytic_err = std::max(analytic_err, std::hypot(smp.state[0] - ref.x,
                                                       smp.state[1] - ref.y));
    }
  }
  ctx.add_artifact("orbit.csv");

  json results;
  results["samples"] = seg.samples.size();
  results["max_analytic_error"] = analytic_err;
  json checks;
  if (degree == 2) {
    results["E"] = geom.E;
    results["R"] = geom.R;
    results["max_E_drift"] = e_drift;
    results["max_circle_residual"] = circle_res;
    checks["e_drift_within_1e-7"] = e_drift <= 1e-7;
    checks["circle_residual_within_1e-7_R2"] = circle_res <= 1e-7 * geom.R * geom.R;
    checks["analytic_orbit_within_1e-8"] = analytic_err <= 1e-8;
  } else {
    checks["completed"] = seg.termination == Termination::predicate_hit;
  }
  ctx.summary["results"] = results;
  return checks;
}

// --------------------------------------------------------------- compactify

json run_compactify(Params& P, RunContext& ctx) {
  std::string map = P.choice(
      "map", "power", {"power", "exponential", "asymptotic", "riemann"});
  json results, checks;

  if (map == "riemann") {
    double x = P.real("x", 0.0);
    double y = P.real("y", 0.0);
    P.reject_unknown();
    SpherePoint pt = riemann_sphere(x, y);
    CsvWriter csv(ctx.out_dir / "point.csv", {"x", "y", "X", "Y", "Z"});
    csv.row(std::vector<double>{x, y, pt.X, pt.Y, pt.Z});
    ctx.add_artifact("point.csv");
    results["X"] = pt.X;
    results["Y"] = pt.Y;
    results["Z"] = pt.Z;
    checks["unit_norm_within_1e-12"] = pt.unit_residual() <= 1e-12;
    ctx.summary["results"] = results;
    return checks;
  }

  double t_star = P.real("t_star", 1.0);
  double a = P.real("a", 1.0);
  int sign = P.integer("sign", 1);
  int samples = P.integer("samples", 1000);
  double t_min = P.real("t_min", map == "power" && a != 1.0 ? 0.0 : 0.0);
  double t_max = P.real("t_max",
                        map == "power" && a != 1.0 ? t_star * (1 - 1e-6)
                                                   : 2.0 * t_star);
  P.reject_unknown();
  if (samples < 2) throw ConfigError("samples must be >= 2");

  CsvWriter csv(ctx.out_dir / "track.csv", {"t", "x", "X", "Y", "residual"});
  double max_res = 0.0;
  for (int i = 0; i < samples; ++i) {
    double t = t_min + (t_max - t_min) * i / (samples - 1);
    double s = t_star - t;
    double x;
    CirclePoint pt;
    if (map == "power") {
      if (s == 0.0) continue;
      if (a == 1.0) {
        x = 1.0 / s; // orbit x = (t*-t)^{-1}, valid through t*
        pt = circle_power(t, x, t_star, a);
      } else {
        if (s <= 0.0) continue; // fractional powers only before t*
        x = std::pow(s, -a);
        pt = circle_power(t, x, t_star, a);
      }
    } else if (map == "exponential") {
      x = std::exp(sign * (t - t_star));
      pt = circle_exponential(t, x, t_star, sign);
    } else { // asymptotic
      double e = std::exp(2.0 * (t - t_star));
      if (std::abs(1.0 - e) < 1e-12) continue;
      x = 2.0 * e / (1.0 - e);
      pt = circle_asymptotic(t, x, t_star);
    }
    max_res = std::max(max_res, pt.unit_residual());
    csv.row(std::vector<double>{t, x, pt.X, pt.Y, pt.unit_residual()});
  }
  ctx.add_artifact("track.csv");

  results["max_unit_residual"] = max_res;
  checks["on_circle_within_1e-12"] = max_res <= 1e-12;
  ctx.summary["results"] = results;
  return checks;
}

// ---------------------------------------------------------- transition-time

json run_transition_time(Params& P, RunContext& ctx) {
  int degree = P.integer("degree", 2);
  double R = P.real("R", 100.0);
  double eps = P.real("eps", 1e-3);
  IntegratorConfig cfg;
  cfg.rel_tol = P.real("rel_tol", 1e-10);
  cfg.abs_tol = P.real("abs_tol", 1e-12);
  P.reject_unknown();
  if (degree != 2 && degree != 3) throw ConfigError("degree must be 2 or 3");

  double T = transition_time(R, eps, degree, cfg);

  CsvWriter csv(ctx.out_dir / "transition.csv", {"degree", "R", "eps", "T"});
  csv.row({std::to_string(degree), fmt17(R), fmt17(eps), fmt17(T)});
  ctx.add_artifact("transition.csv");

  json results;
  results["T"] = T;
  if (degree == 2) results["T_times_R"] = T * R;
  ctx.summary["results"] = results;
  json checks;
  checks["finite"] = std::isfinite(T);
  return checks;
}

// ---------------------------------------------------------------- pde-cross

std::vector<double> analytic_zero_set(double t, double r) {
  // zeros of analytic_u - r: cos(2x) = (r - 1.5 e^{-t}) / (0.4 e^{-5t})
  double c = (r - 1.5 * std::exp(-t)) / (0.4 * std::exp(-5.0 * t));
  if (c < -1.0 || c > 1.0) return {};
  double x1 = 0.5 * std::acos(c);
  constexpr double kPi = 3.14159265358979323846;
  if (x1 == kPi - x1) return {x1};
  return {x1, kPi - x1};
}

void write_snapshot(const Field& field, const fs::path& path) {
  CsvWriter csv(path, {"x", "chart", "w", "v"});
  for (int i = 0; i < field.grid.n_nodes; ++i) {
    PdeChart chart = field.chart_at(i);
    double raw = field.values[i];
    double w = chart == PdeChart::bad_w ? raw
               : raw == 0.0 ? std::numeric_limits<double>::infinity()
                            : 1.0 / raw;
    double v = chart == PdeChart::good_v ? raw
               : raw == 0.0 ? std::numeric_limits<double>::infinity()
                            : 1.0 / raw;
    csv.row({fmt17(field.grid.x(i)),
             chart == PdeChart::bad_w ? "bad_w" : "good_v", fmt17(w),
             fmt17(v)});
  }
}

json run_pde_cross(Params& P, RunContext& ctx) {
  PdeParams params;
  params.n_nodes = P.integer("n_nodes", 257);
  params.dt = P.real("dt", 1e-4);
  params.w_big = P.real("w_big", 1e4);
  params.r = P.real("r", 1.0);
  params.guard_band = P.integer("guard_band", 4);
  params.hysteresis = P.real("hysteresis", 0.1);
  double t_end = P.real("t_end", 0.47);
  int n_snapshots = P.integer("n_snapshots", 6);
  P.reject_unknown();

  Field field = initial_field(params);
  double h = field.grid.h();

  std::vector<double> snap_times;
  for (int k = 1; k <= n_snapshots; ++k)
    snap_times.push_back(t_end * k / n_snapshots);
  std::size_t next_snap = 0;

  json era_log = json::array();
  std::vector<std::size_t> topology; // region counts in order of change
  double max_emitted = 0.0, max_locus_err = 0.0;
  bool loci_ok = true;
  long steps = static_cast<long>(std::llround(t_end / params.dt));

  for (long s = 0; s < steps; ++s) {
    EraRecord rec;
    step_era(field, params, &rec);
    // bound on stored values: each node in its own chart (max_abs_w reads the
    // w-equivalent, which legitimately spikes when a node sits on a locus)
    for (double v : field.values)
      max_emitted = std::max(max_emitted, std::abs(v));

    if (topology.empty() || topology.back() != rec.regions.size())
      topology.push_back(rec.regions.size());

    // Compare loci only while the analytic zero set exists: near the touch
    // and the boundary exit the numeric crossing leads/lags by O(dt + h^2),
    // so a locus can briefly exist while the analytic set is empty.
    std::vector<double> zeros = analytic_zero_set(rec.t, params.r);
    if (!zeros.empty()) {
      for (double locus : rec.loci) {
        double best = std::numeric_limits<double>::infinity();
        for (double z : zeros) best = std::min(best, std::abs(locus - z));
        max_locus_err = std::max(max_locus_err, best);
        if (best > 2.0 * h) loci_ok = false;
      }
    }

    bool log_era = rec.regions.size() > 1 || rec.era % 250 == 0;
    if (log_era) {
      json e;
      e["era_index"] = rec.era;
      e["t"] = rec.t;
      json regs = json::array();
      for (std::size_t k = 0; k < rec.regions.size(); ++k) {
        json reg;
        reg["first"] = rec.regions[k].first;
        reg["last"] = rec.regions[k].last;
        reg["chart"] =
            rec.regions[k].chart == PdeChart::bad_w ? "bad_w" : "good_v";
        reg["x_first"] = rec.region_x[k].first;
        reg["x_last"] = rec.region_x[k].second;
        regs.push_back(reg);
      }
      e["regions"] = regs;
      e["max_abs_w"] = rec.max_abs_w;
      e["crossing_loci"] = rec.loci;
      era_log.push_back(e);
    }

    if (next_snap < snap_times.size() &&
        field.t >= snap_times[next_snap] - 0.5 * params.dt) {
      std::string name = "snapshot_" + std::to_string(next_snap) + ".csv";
      write_snapshot(field, ctx.out_dir / name);
      ctx.add_artifact(name);
      ++next_snap;
    }
  }
  write_json(ctx.out_dir / "era_log.json", era_log);
  ctx.add_artifact("era_log.json");

  bool saw3 = false, saw5 = false, order_ok = true;
  for (std::size_t c : topology) {
    if (c == 3) saw3 = true;
    if (c == 5) {
      saw5 = true;
      if (!saw3) order_ok = false;
    }
  }

  json results;
  results["t_touch_analytic"] = analytic_touch_time();
  results["topology_sequence"] = topology;
  results["max_emitted_value"] = max_emitted;
  results["max_locus_error"] = max_locus_err;
  results["grid_h"] = h;
  ctx.summary["results"] = results;

  json checks;
  checks["topology_3_then_5"] = saw3 && saw5 && order_ok;
  checks["loci_within_2h"] = loci_ok;
  checks["values_below_10_w_big"] = max_emitted <= 10.0 * params.w_big;
  return checks;
}

// -------------------------------------------------------------- pde-complex

json run_pde_complex(Params& P, RunContext& ctx) {
  PdeParams params;
  params.n_nodes = P.integer("n_nodes", 769);
  params.r = P.real("r", 1.0);
  double epsilon = P.real("epsilon", 1e-3);
  double dt = P.real("dt", 5e-6);
  double t_end = P.real("t_end", 2.0 * analytic_touch_time());
  std::vector<double> times =
      P.real_list("times", "0.05,0.1,0.15,0.6,0.66");
  double agree_tol = P.real("agree_tol", 1e-3);
  P.reject_unknown();

  ComplexField field = initial_complex_field(params, epsilon);
  ComplexReconstruction oracle(epsilon, params.r);

  std::sort(times.begin(), times.end());
  std::size_t next = 0;
  double max_agree_err = 0.0, max_b = 0.0;
  bool finite = true;
  long steps = static_cast<long>(std::llround(t_end / dt));

  auto compare_and_dump = [&](std::size_t idx) {
    std::string name = "complex_snapshot_" + std::to_string(idx) + ".csv";
    CsvWriter csv(ctx.out_dir / name, {"x", "a", "b", "a_ref", "b_ref"});
    for (int i = 0; i < params.n_nodes; ++i) {
      double x = field.grid.x(i);
      auto [ar, br] = oracle.eval(x, field.t);
      csv.row(std::vector<double>{x, field.a[i], field.b[i], ar, br});
      max_agree_err = std::max({max_agree_err, std::abs(field.a[i] - ar),
                                std::abs(field.b[i] - br)});
    }
    ctx.add_artifact(name);
  };

  for (long s = 0; s < steps; ++s) {
    complex_pde_step(field, dt, params.r);
    for (int i = 0; i < params.n_nodes; ++i) {
      if (!std::isfinite(field.a[i]) || !std::isfinite(field.b[i]))
        finite = false;
      max_b = std::max(max_b, std::abs(field.b[i]));
    }
    if (next < times.size() && field.t >= times[next] - 0.5 * dt) {
      compare_and_dump(next);
      ++next;
    }
  }

  json results;
  results["t_end"] = field.t;
  results["matched_times"] = times;
  results["max_reconstruction_error"] = max_agree_err;
  results["max_abs_b"] = max_b;
  ctx.summary["results"] = results;

  json checks;
  checks["fields_finite"] = finite;
  checks["reconstruction_agrees"] = max_agree_err <= agree_tol;
  if (epsilon == 0.0) checks["b_identically_zero"] = max_b == 0.0;
  return checks;
}

// -------------------------------------------------------------- scaling-fit

json run_scaling_fit(Params& P, RunContext& ctx) {
  PdeParams params;
  params.n_nodes = P.integer("n_nodes", 513);
  params.dt = P.real("dt", 2.5e-5);
  params.w_big = P.real("w_big", 1e4);
  params.r = P.real("r", 1.0);
  P.reject_unknown();

  Field field = initial_field(params);
  std::vector<double> xs(field.grid.n_nodes);
  for (int i = 0; i < field.grid.n_nodes; ++i) xs[i] = field.grid.x(i);

  CsvWriter csv(ctx.out_dir / "series.csv", {"t", "max_abs_w", "tip_width"});
  std::vector<std::pair<double, double>> amp_series;
  std::vector<std::pair<double, double>> width_series;
  // No buffers before the touch: step the single bad region until W_big.
  while (true) {
    EraRecord rec;
    step_era(field, params, &rec);
    double amp = rec.max_abs_w;
    double width = half_max_width(xs, field.values);
    csv.row(std::vector<double>{field.t, amp, width});
    amp_series.emplace_back(field.t, amp);
    if (width > 0.0) width_series.emplace_back(field.t, width);
    if (amp >= params.w_big) break;
    if (field.t > 1.0) throw PdeError("scaling-fit: no blowup before t = 1");
  }
  ctx.add_artifact("series.csv");

  // Fit over amplitudes in [max/100, max/10]: the decade right before w_big
  // carries the first-order implicit-Euler lag at |w_t| ~ w^2.
  double amp_max = amp_series.back().second;
  std::vector<std::pair<double, double>> amp_tail;
  for (const auto& pr : amp_series)
    if (pr.second >= amp_max / 100.0 && pr.second <= amp_max / 10.0)
      amp_tail.push_back(pr);
  if (amp_tail.size() < 4)
    throw PdeError("scaling-fit: too few samples in the fit window");
  double t_decade = amp_tail.front().first;
  double t_hi = amp_tail.back().first;

  ScalingFitResult amp_fit = fit_blowup_scaling(amp_tail);

  // Width exponent by plain least squares against the fitted t*.
  double width_exp = 0.0;
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& [t, wdt] : width_series) {
      if (t < t_decade || t > t_hi || amp_fit.t_star_hat <= t) continue;
      double lx = std::log(amp_fit.t_star_hat - t), ly = std::log(wdt);
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
      ++n;
    }
    if (n >= 4) width_exp = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }

  BlowupScaling predicted = predict_exponents({2.0, 2.0});

  json results;
  results["t_star_hat"] = amp_fit.t_star_hat;
  results["amplitude_exponent"] = amp_fit.exponent_hat;
  results["width_exponent"] = width_exp;
  results["fit_residual"] = amp_fit.residual;
  results["predicted_amplitude_exponent"] = predicted.amplitude_exponent;
  results["predicted_width_exponent"] = predicted.width_exponent;
  ctx.summary["results"] = results;

  json checks;
  checks["fit_accepted"] = !amp_fit.rejected;
  checks["amplitude_exponent_within_0.05"] =
      std::abs(amp_fit.exponent_hat - predicted.amplitude_exponent) <= 0.05;
  checks["width_exponent_within_0.1"] =
      std::abs(width_exp - predicted.width_exponent) <= 0.1;
  return checks;
}

// --------------------------------------------------------- parabola-fixture

json run_parabola_fixture(Params& P, RunContext& ctx) {
  double t = P.real("t", 1.5);
  int n_nodes = P.integer("n_nodes", 201);
  double x_min = P.real("x_min", -1.0);
  double x_max = P.real("x_max", 1.0);
  P.reject_unknown();
  if (n_nodes < 2 || x_max <= x_min) throw ConfigError("bad fixture grid");

  std::vector<double> grid(n_nodes);
  for (int i = 0; i < n_nodes; ++i)
    grid[i] = x_min + (x_max - x_min) * i / (n_nodes - 1);
  ParabolaFields fields = parabola_fixture(t, grid);

  CsvWriter csv(ctx.out_dir / "fields.csv", {"x", "v", "w"});
  for (int i = 0; i < n_nodes; ++i)
    csv.row(std::vector<double>{grid[i], fields.v[i], fields.w[i]});
  ctx.add_artifact("fields.csv");

  json results;
  results["crossings"] = fields.crossings;
  json checks;
  if (t >= 1.0) {
    double expect = std::sqrt(0.1 * (t - 1.0));
    double err = 0.0;
    for (double c : fields.crossings)
      err = std::max(err, std::abs(std::abs(c) - expect));
    results["crossing_error"] = err;
    checks["crossings_match"] = err <= 1e-12;
  } else {
    checks["no_crossings"] = fields.crossings.empty();
  }
  ctx.summary["results"] = results;
  return checks;
}

} // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "ode-cross",   "ode-complex", "compactify",  "transition-time",
      "pde-cross",   "pde-complex", "scaling-fit", "parabola-fixture"};
  return names;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  ScenarioConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto is_space = [](unsigned char c) { return std::isspace(c); };
    line.erase(line.begin(),
               std::find_if_not(line.begin(), line.end(), is_space));
    line.erase(std::find_if_not(line.rbegin(), line.rend(), is_space).base(),
               line.end());
    if (line.empty()) continue;
    apply_override(config, line);
  }
  return config;
}

void apply_override(ScenarioConfig& config, const std::string& assignment) {
  std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::runtime_error("expected key=value, got '" + assignment + "'");
  std::string key = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);
  if (key == "scenario")
    config.scenario = value;
  else if (key == "output_dir")
    config.output_dir = value;
  else
    config.parameters[key] = value;
}

int run_scenario(const ScenarioConfig& config) {
  fs::path out_dir;
  if (!config.output_dir.empty()) {
    out_dir = config.output_dir;
  } else if (const char* env = std::getenv("CROSSINF_OUT")) {
    out_dir = env;
  } else {
    out_dir = "out";
  }

  RunContext ctx;
  ctx.out_dir = out_dir;
  ctx.summary["scenario"] = config.scenario;
  json params_json;
  for (const auto& [k, v] : config.parameters) params_json[k] = v;
  ctx.summary["parameters"] = params_json;

  Params P(config.parameters);
  json checks;
  try {
    fs::create_directories(out_dir);
    if (config.scenario == "ode-cross")
      checks = run_ode_cross(P, ctx);
    else if (config.scenario == "ode-complex")
      checks = run_ode_complex(P, ctx);
    else if (config.scenario == "compactify")
      checks = run_compactify(P, ctx);
    else if (config.scenario == "transition-time")
      checks = run_transition_time(P, ctx);
    else if (config.scenario == "pde-cross")
      checks = run_pde_cross(P, ctx);
    else if (config.scenario == "pde-complex")
      checks = run_pde_complex(P, ctx);
    else if (config.scenario == "scaling-fit")
      checks = run_scaling_fit(P, ctx);
    else if (config.scenario == "parabola-fixture")
      checks = run_parabola_fixture(P, ctx);
    else
      throw ConfigError("unknown scenario '" + config.scenario + "'");
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    json diag;
    diag["scenario"] = config.scenario;
    diag["error"] = e.what();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!ec) write_json(out_dir / "diagnostic.json", diag);
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }

  bool all_pass = true;
  for (const auto& [k, v] : checks.items())
    if (v.is_boolean() && !v.get<bool>()) all_pass = false;
  ctx.summary["checks"] = checks;
  ctx.summary["pass"] = all_pass;
  ctx.summary["artifacts"] = ctx.artifacts;
  write_json(ctx.out_dir / "summary.json", ctx.summary);
  return all_pass ? 0 : 3;
}

} // namespace crossinf
