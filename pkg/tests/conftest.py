"""Shared fixtures and the acceptance-report summary hook."""

import numpy as np
import pytest

from alphawkb import (
    HarmonicPotential,
    LinearWellPotential,
    MorsePotential,
    QuarticPotential,
    ScreeningParams,
    TabulatedPotential,
)

#: lines recorded by the acceptance tests, echoed in the terminal summary
#: so the pass/fail verdicts survive pytest's output capture.
ACCEPTANCE_LINES: list[str] = []


def record_criterion(name: str, passed: bool, detail: str) -> str:
    line = f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture
def harmonic():
    return HarmonicPotential()


@pytest.fixture
def bouncer():
    # 2M = 1 turns the eigenproblem into psi'' + (E - x) psi = 0 on x >= 0
    return LinearWellPotential()


@pytest.fixture
def unit_params():
    return ScreeningParams(alpha=1.0)


@pytest.fixture
def quartic():
    return QuarticPotential()


@pytest.fixture
def morse():
    return MorsePotential(depth=6.0, a=0.7)


@pytest.fixture
def tabulated():
    # smooth asymmetric double-knee well sampled densely enough that the
    # spline reproduces the generating function's low derivatives
    xs = np.linspace(-4.0, 4.0, 241)
    vs = 0.5 * xs**2 + 0.15 * xs**3 + 0.05 * xs**4
    return TabulatedPotential(xs=tuple(xs), vs=tuple(vs))


@pytest.fixture
def catalog(harmonic, bouncer, quartic, morse, tabulated):
    """One instance of every catalog entry, keyed by kind."""
    return {
        "harmonic": harmonic,
        "linear": bouncer,
        "quartic": quartic,
        "morse": morse,
        "tabulated": tabulated,
    }
