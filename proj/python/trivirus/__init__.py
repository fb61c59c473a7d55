"""Tri-virus SIS network model: spectral analysis, equilibria, stability and simulation."""

import json

from . import _core
from ._core import (
    System,
    TrivirusError,
    __version__,
    example_system,
    perron,
    random_initial_condition,
    simulate,
    single_virus_endemic,
    spectral_abscissa,
    spectral_radius,
)

__all__ = [
    "System",
    "TrivirusError",
    "__version__",
    "analyze",
    "analyze_scenario",
    "boundary_stability",
    "dfe_report",
    "example_scenario",
    "example_system",
    "line_stability",
    "lyapunov_certificate",
    "monotonicity",
    "perron",
    "random_initial_condition",
    "simulate",
    "simulate_scenario",
    "single_virus_endemic",
    "spectral_abscissa",
    "spectral_radius",
]


def dfe_report(system):
    return json.loads(_core._dfe_report(system))


def boundary_stability(system, virus):
    """Verdict for the boundary equilibrium of ``virus`` (0-based)."""
    return json.loads(_core._boundary_stability(system, virus))


def line_stability(system):
    return json.loads(_core._line_stability(system))


def lyapunov_certificate(healing, infection):
    return json.loads(_core._lyapunov_certificate(healing, infection))


def monotonicity(system):
    return json.loads(_core._monotonicity(system))


def analyze(system):
    """Full analysis report for a system, as a dict."""
    return json.loads(_core._analyze(system))


def _scenario_text(scenario):
    return scenario if isinstance(scenario, str) else json.dumps(scenario)


def analyze_scenario(scenario):
    """Analysis report for a scenario given as a dict or JSON text."""
    return json.loads(_core._analyze_scenario(_scenario_text(scenario)))


def simulate_scenario(scenario, csv_name="trajectory.csv"):
    """Simulate a scenario; returns times, states, the CSV text and the report dict."""
    out = _core._simulate_scenario(_scenario_text(scenario), csv_name)
    out["report"] = json.loads(out["report"])
    return out


def example_scenario(example, seed=1):
    return json.loads(_core._example_scenario(example, seed))
