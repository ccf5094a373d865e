import json
import math
import os

import jsonschema
import pytest

import crossinf


def test_cross_infinity_quadratic():
    problem = crossinf.OdeProblem()
    problem.rhs = crossinf.Rhs.power
    problem.p = 2.0
    problem.state0 = [1.0, 0.0]
    result = crossinf.cross_infinity(
        problem, crossinf.IntegratorConfig(), crossinf.ProtocolOptions()
    )
    assert abs(result.record.t_star_estimate - 1.0) < 1e-6
    last = result.trajectory.segments[-1].samples[-1]
    assert abs(last.state[0] + 1.0) < 1e-6


def test_riemann_sphere_origin():
    pt = crossinf.riemann_sphere(0.0, 0.0)
    assert (pt.X, pt.Y, pt.Z) == (0.0, 0.0, -1.0)
    far = crossinf.riemann_sphere(1e12, 0.0)
    assert far.Z == pytest.approx(1.0, abs=1e-10)


def test_predict_exponents():
    scaling = crossinf.predict_exponents(2.0, 2.0)
    assert scaling.amplitude_exponent == pytest.approx(-1.0)
    assert scaling.width_exponent == pytest.approx(0.5)


def test_invariant_e():
    assert crossinf.invariant_E(crossinf.ComplexState(1.0, 1.0)) == pytest.approx(2.0)


def test_run_scenario_and_schema(tmp_path):
    config = crossinf.ScenarioConfig()
    config.scenario = "parabola-fixture"
    config.parameters = {"t": "1.4"}
    config.output_dir = str(tmp_path)
    assert crossinf.run_scenario(config) == 0

    summary = json.loads((tmp_path / "summary.json").read_text())
    with open(os.environ["CROSSINF_SCHEMA"]) as fh:
        schema = json.load(fh)
    jsonschema.validate(summary, schema)
    assert summary["pass"] is True


def test_scenario_names():
    names = crossinf.scenario_names()
    assert "ode-cross" in names and "pde-complex" in names and len(names) == 8
