from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np
import pytest

from sonovac import radiation
from sonovac.trajectory import Trajectory

FS = 1e-15
UM = 1e-6

REPO = Path(__file__).resolve().parents[1]
SCENARIOS = REPO / "scenarios"


class GaussianPulse:
    """Wall speed ``beta0 exp(-t^2 / 2 sigma^2)`` at a fixed radius."""

    def __init__(self, beta0: float, sigma: float, radius: float = 1e-6):
        self.beta0, self.sigma, self.r = beta0, sigma, radius

    def beta(self, t):
        return self.beta0 * np.exp(-np.asarray(t, dtype=float) ** 2 / (2 * self.sigma**2))

    def radius(self, t):
        return np.full(np.shape(t), self.r)

    def fourier(self, omega: float, t_ref: float) -> complex:
        """``int beta(tau) exp(i omega (tau - t_ref)) dtau`` over the real line."""
        return (self.beta0 * self.sigma * math.sqrt(2 * math.pi)
                * math.exp(-(omega * self.sigma) ** 2 / 2) * complex(math.cos(-omega * t_ref),
                                                                      math.sin(-omega * t_ref)))


@pytest.fixture
def reference():
    return radiation.reference_scenario()


@pytest.fixture
def micron_traj():
    """R0 = 10 um, Rmin = 1 um, gamma = 1 ps."""
    return Trajectory.model(10 * UM, 1 * UM, 1e-12)


@pytest.fixture
def write_scenario(tmp_path):
    def _write(text: str, name: str = "case.scn") -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
