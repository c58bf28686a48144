import numpy as np
import pytest

from dfrcwave import (
    ManifoldSpec,
    closed_form_waveform,
    generate_channel,
    generate_symbols,
    omni_covariance,
    stack_problem,
)
from dfrcwave.manifold import random_point

# filled by test_acceptance.py, printed after the run by the hook below
acceptance_lines = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def make_problem(n=4, k=2, length=16, max_lag=3, total_power=1.0,
                 rho1=0.15, rho2=0.7, rho3=0.15, seed=0):
    """Small solvable instance with its warm start, stack, and manifold."""
    gen = np.random.default_rng(seed)
    h = generate_channel(k, n, gen)
    s = generate_symbols(k, length, "QPSK", gen)
    x0 = closed_form_waveform(h, s, omni_covariance(n, total_power), length)
    prob = stack_problem(h, s, x0, rho1, rho2, rho3, max_lag)
    spec = ManifoldSpec.from_power(n, length, total_power)
    return h, s, x0, prob, spec


def tangent_at(x, spec, seed=0):
    """Random tangent vector at x (radial row components removed)."""
    from dfrcwave.manifold import project_tangent

    gen = np.random.default_rng(seed)
    g = gen.standard_normal(x.shape) + 1j * gen.standard_normal(x.shape)
    return project_tangent(x, g, spec)


@pytest.fixture
def on_manifold():
    spec = ManifoldSpec.from_power(4, 16, 1.0)
    return random_point(spec, 7), spec
