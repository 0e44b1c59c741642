import pytest

from homcavity import Cavity, InterferometerConfig, SpectralProfile

LAMBDA = 826.2e-9
PUMP = 413.1e-9
L_RES = 0.404838e-3
L_ANTI = 0.4050447e-3
L_NEITHER = 0.4e-3
MID_PLATFORM = 0.66733e-12
PS = 1e-12
FS = 1e-15

ACCEPTANCE_LINES = []


@pytest.fixture
def profile():
    return SpectralProfile.degenerate(LAMBDA, 8e-9)


@pytest.fixture
def res_cavity():
    return Cavity(L_RES, 0.7)


@pytest.fixture
def anti_cavity():
    return Cavity(L_ANTI, 0.7)


@pytest.fixture
def res_anti(profile):
    """Idler anti-resonant, signal resonant."""
    return InterferometerConfig(profile, Cavity(L_ANTI, 0.7), Cavity(L_RES, 0.7))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
