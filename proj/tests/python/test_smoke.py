import csv
import io

import numpy as np
import pytest

import trivirus


def test_version():
    assert trivirus.__version__ == "0.1.0"


def test_example_one_boundary_values():
    s = trivirus.example_system(1)
    assert (s.n, s.m) == (4, 3)
    v = trivirus.boundary_stability(s, 0)
    assert v["verdict"] == "LocallyExponentiallyStable"
    rho = sorted(v["rho"].values())
    assert rho[0] == pytest.approx(0.9829, abs=1e-3)
    assert rho[1] == pytest.approx(0.99624, abs=1e-3)


def test_perron_matches_numpy():
    a = np.array([[0.0, 2.0, 0.5], [1.0, 0.0, 0.0], [0.3, 0.7, 0.1]])
    p = trivirus.perron(a)
    assert p["rho"] == pytest.approx(max(abs(np.linalg.eigvals(a))), abs=1e-10)
    assert np.allclose(a @ p["right"], p["rho"] * p["right"], atol=1e-10)
    assert trivirus.spectral_radius(a) == pytest.approx(p["rho"], abs=1e-12)


def test_jacobian_matches_finite_differences():
    s = trivirus.example_system(2)
    x = trivirus.random_initial_condition(s.n, s.m, 7)
    j = s.jacobian(x)
    h = 1e-6
    fd = np.column_stack(
        [(s.vector_field(x + h * e) - s.vector_field(x - h * e)) / (2 * h) for e in np.eye(len(x))]
    )
    assert np.allclose(j, fd, atol=1e-8)


def test_simulation_example_four_reaches_line():
    s = trivirus.example_system(4)
    x0 = trivirus.random_initial_condition(s.n, s.m, 3)
    out = trivirus.simulate(s, x0, 2000.0)
    assert out["termination"] == "TimeLimit"
    assert out["states"].shape == (len(out["times"]), 12)
    assert out["domain_violation_max"] <= 1e-9
    assert np.max(np.abs(s.vector_field(out["states"][-1]))) < 1e-8


def test_scenario_round_trip_and_csv():
    scenario = trivirus.example_scenario(3, seed=5)
    scenario["t_end"] = 500.0
    out = trivirus.simulate_scenario(scenario, csv_name="ex3.trajectory.csv")
    rows = list(csv.reader(io.StringIO(out["csv"])))
    assert rows[0][0] == "t" and rows[0][1] == "x1_1" and len(rows[0]) == 13
    assert len(rows) == len(out["times"]) + 1
    assert out["report"]["analyses"]["line"]["verdict"] == "Unstable"


def test_analyze_and_monotonicity():
    r = trivirus.analyze(trivirus.example_system(1))
    assert r["analyses"]["dfe"]["verdict"] == "NotUnique"
    m = trivirus.monotonicity(trivirus.example_system(1))
    assert m["consistent"] is False


def test_identical_certificate():
    d = np.ones(3)
    b = np.array([[0.0, 2.0, 0.0], [0.0, 0.0, 2.0], [2.0, 0.0, 0.0]])
    c = trivirus.lyapunov_certificate(d, b)
    assert np.allclose(c["x_tilde"], 0.5)


def test_errors_carry_codes():
    with pytest.raises(trivirus.TrivirusError) as info:
        trivirus.System([np.array([-1.0, 1.0])], [np.ones((2, 2))])
    assert info.value.code == "NonPositiveHealingRate"
    assert info.value.exit_code == 2
    with pytest.raises(trivirus.TrivirusError) as info:
        trivirus.analyze_scenario('{"n": 2}')
    assert info.value.code == "SchemaError"
