#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crossinf/blowup.hpp"
#include "crossinf/compactify.hpp"
#include "crossinf/complex_flows.hpp"
#include "crossinf/mn_scaling.hpp"
#include "crossinf/ode.hpp"
#include "crossinf/pde.hpp"
#include "crossinf/scenario.hpp"

namespace py = pybind11;
using namespace crossinf;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-time blowup crossing: ODE/PDE engines and scenario runner";

  py::enum_<Rhs>(m, "Rhs")
      .value("power", Rhs::power)
      .value("asymptotic_quadratic", Rhs::asymptotic_quadratic)
      .value("linear", Rhs::linear)
      .value("complex_quadratic", Rhs::complex_quadratic)
      .value("complex_cubic", Rhs::complex_cubic)
      .value("good_affine", Rhs::good_affine)
      .value("good_constant", Rhs::good_constant);

  py::enum_<Chart>(m, "Chart")
      .value("original", Chart::original)
      .value("inverse_power", Chart::inverse_power)
      .value("inverse_affine", Chart::inverse_affine);

  py::enum_<Branch>(m, "Branch")
      .value("real_continuation", Branch::real_continuation)
      .value("imaginary_plus", Branch::imaginary_plus)
      .value("imaginary_minus", Branch::imaginary_minus);

  py::class_<OdeProblem>(m, "OdeProblem")
      .def(py::init<>())
      .def_readwrite("rhs", &OdeProblem::rhs)
      .def_readwrite("p", &OdeProblem::p)
      .def_readwrite("sign", &OdeProblem::sign)
      .def_readwrite("state0", &OdeProblem::state0)
      .def_readwrite("t0", &OdeProblem::t0);

  py::class_<IntegratorConfig>(m, "IntegratorConfig")
      .def(py::init<>())
      .def_readwrite("rel_tol", &IntegratorConfig::rel_tol)
      .def_readwrite("abs_tol", &IntegratorConfig::abs_tol)
      .def_readwrite("initial_step", &IntegratorConfig::initial_step)
      .def_readwrite("max_step", &IntegratorConfig::max_step)
      .def_readwrite("max_steps", &IntegratorConfig::max_steps);

  py::class_<ProtocolOptions>(m, "ProtocolOptions")
      .def(py::init<>())
      .def_readwrite("switch_level", &ProtocolOptions::switch_level)
      .def_readwrite("return_level", &ProtocolOptions::return_level)
      .def_readwrite("branch_policy", &ProtocolOptions::branch_policy)
      .def_readwrite("t_end", &ProtocolOptions::t_end);

  py::class_<PowerLawFit>(m, "PowerLawFit")
      .def_readonly("p_hat", &PowerLawFit::p_hat)
      .def_readonly("c_hat", &PowerLawFit::c_hat)
      .def_readonly("r_squared", &PowerLawFit::r_squared)
      .def_readonly("window", &PowerLawFit::window)
      .def_readonly("accepted", &PowerLawFit::accepted);

  py::class_<CrossingRecord>(m, "CrossingRecord")
      .def_readonly("t_star_estimate", &CrossingRecord::t_star_estimate)
      .def_readonly("t_in", &CrossingRecord::t_in)
      .def_readonly("x_in", &CrossingRecord::x_in)
      .def_readonly("t_out", &CrossingRecord::t_out)
      .def_readonly("x_out", &CrossingRecord::x_out)
      .def_readonly("branch", &CrossingRecord::branch);

  py::class_<ChartState>(m, "ChartState")
      .def_readonly("chart", &ChartState::chart)
      .def_readonly("q", &ChartState::q)
      .def("forward", &ChartState::forward)
      .def("backward", &ChartState::backward)
      .def("backward_magnitude", &ChartState::backward_magnitude);

  py::class_<Sample>(m, "Sample")
      .def_readonly("t", &Sample::t)
      .def_readonly("state", &Sample::state);

  py::enum_<Termination>(m, "Termination")
      .value("predicate_hit", Termination::predicate_hit)
      .value("max_steps", Termination::max_steps)
      .value("step_underflow", Termination::step_underflow);

  py::class_<TrajectorySegment>(m, "TrajectorySegment")
      .def_readonly("chart", &TrajectorySegment::chart)
      .def_readonly("samples", &TrajectorySegment::samples)
      .def_readonly("termination", &TrajectorySegment::termination);

  py::class_<ChartedTrajectory>(m, "ChartedTrajectory")
      .def_readonly("segments", &ChartedTrajectory::segments);

  py::class_<CrossingResult>(m, "CrossingResult")
      .def_readonly("trajectory", &CrossingResult::trajectory)
      .def_readonly("record", &CrossingResult::record)
      .def_readonly("fit", &CrossingResult::fit)
      .def_readonly("chart", &CrossingResult::chart);

  m.def("cross_infinity", &cross_infinity, py::arg("problem"),
        py::arg("config") = IntegratorConfig{},
        py::arg("options") = ProtocolOptions{});
  m.def("detect_power_law", &detect_power_law, py::arg("recent"),
        py::arg("min_window") = 8, py::arg("r2_threshold") = 0.999);
  m.def("default_switch_level", &default_switch_level);

  py::class_<CirclePoint>(m, "CirclePoint")
      .def_readonly("X", &CirclePoint::X)
      .def_readonly("Y", &CirclePoint::Y)
      .def("unit_residual", &CirclePoint::unit_residual);
  py::class_<SpherePoint>(m, "SpherePoint")
      .def_readonly("X", &SpherePoint::X)
      .def_readonly("Y", &SpherePoint::Y)
      .def_readonly("Z", &SpherePoint::Z)
      .def("unit_residual", &SpherePoint::unit_residual);
  m.def("circle_power", &circle_power, py::arg("t"), py::arg("x"),
        py::arg("t_star"), py::arg("a"), py::arg("normalize") = false);
  m.def("circle_exponential", &circle_exponential, py::arg("t"), py::arg("x"),
        py::arg("t_star"), py::arg("sign"), py::arg("normalize") = false);
  m.def("circle_asymptotic", &circle_asymptotic, py::arg("t"), py::arg("x"),
        py::arg("t_star"), py::arg("normalize") = false);
  m.def("riemann_sphere", &riemann_sphere, py::arg("x"), py::arg("y"));

  py::class_<ComplexState>(m, "ComplexState")
      .def(py::init<>())
      .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
      .def_readwrite("x", &ComplexState::x)
      .def_readwrite("y", &ComplexState::y);
  m.def("analytic_quad_orbit", &analytic_quad_orbit);
  m.def("analytic_cubic_orbit", &analytic_cubic_orbit);
  m.def("invariant_E", &invariant_E);
  m.def("transition_time", &transition_time, py::arg("R"), py::arg("eps"),
        py::arg("degree"), py::arg("config") = IntegratorConfig{});

  py::class_<BlowupScaling>(m, "BlowupScaling")
      .def_readonly("amplitude_exponent", &BlowupScaling::amplitude_exponent)
      .def_readonly("width_exponent", &BlowupScaling::width_exponent);
  py::class_<ScalingFitResult>(m, "ScalingFitResult")
      .def_readonly("t_star_hat", &ScalingFitResult::t_star_hat)
      .def_readonly("exponent_hat", &ScalingFitResult::exponent_hat)
      .def_readonly("residual", &ScalingFitResult::residual)
      .def_readonly("rejected", &ScalingFitResult::rejected);
  m.def("predict_exponents",
        [](double a, double s) { return predict_exponents({a, s}); },
        py::arg("a"), py::arg("s"));
  m.def("fit_blowup_scaling", &fit_blowup_scaling);

  m.def("analytic_u", &analytic_u);
  m.def("analytic_touch_time", &analytic_touch_time);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("scenario", &ScenarioConfig::scenario)
      .def_readwrite("parameters", &ScenarioConfig::parameters)
      .def_readwrite("output_dir", &ScenarioConfig::output_dir);
  m.def("run_scenario", &run_scenario);
  m.def("scenario_names", [] { return scenario_names(); });
}
