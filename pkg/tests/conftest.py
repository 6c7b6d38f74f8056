import math

import pytest

from vibcavity.cavity import CavityProfile, ModeSpec

TWO_PI = 2 * math.pi


@pytest.fixture
def unit_mode():
    """Mode m=1 with omega_m0 = 1 (L0 = 2 pi, c = 1)."""
    return ModeSpec(1, TWO_PI)


@pytest.fixture
def resonant_profile():
    """eps/L0 = 1e-3 driven at twice the unit-mode frequency."""
    return CavityProfile.sinusoidal(TWO_PI, TWO_PI * 1e-3, 2.0)


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
