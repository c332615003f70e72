import numpy as np
import pytest

from frenetpark import builtin_scenario
from frenetpark.signals import derivatives

OMEGA_0 = 2 * np.pi * 60
V = 15e3
ALPHA = 2 * np.pi / 3

_acceptance_lines = []


def record(criterion, ok, detail=""):
    _acceptance_lines.append(f"{criterion:<4} {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


def balanced(theta, amp=V):
    """Positive-sequence balanced phase vector amp * (sin θ, sin(θ-α), sin(θ+α))."""
    return amp * np.array([np.sin(theta), np.sin(theta - ALPHA), np.sin(theta + ALPHA)])


def random_rotation(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def scenario_stack(name, t, order=2):
    d = derivatives(builtin_scenario(name), t, order)
    return [d[k] for k in range(order + 1)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
