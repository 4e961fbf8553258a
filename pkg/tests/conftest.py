import numpy as np
import pytest

from hcseries import build_datum

KOORNWINDER_KAPPA = {"long": 0.17, "short": {"alpha": 0.13, "2alpha": 0.27, "alpha1": 0.21, "2alpha1": 0.08}}
B2_KAPPA = {"long": 0.37, "short": {"alpha": 0.33, "2alpha": 0.27, "alpha1": 0.21, "2alpha1": 0.18}}
REFLECTIONLESS_KAPPA = {"long": 0.5, "short": {"alpha": 0.5, "2alpha": 0.0, "alpha1": 0.0, "2alpha1": 0.5}}

# one summary line per acceptance criterion, filled by test_acceptance.py
CRITERIA = {}


def record(number, title, passed, detail):
    CRITERIA[number] = (title, passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        title, passed, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if passed else 'FAIL'}  {title}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def a1():
    return build_datum("A", 1, "t", 0.3, 0.3)


@pytest.fixture(scope="session")
def a2():
    return build_datum("A", 2, "u", 0.31, 0.3)


@pytest.fixture(scope="session")
def gl2():
    return build_datum("GL", 2, "u", 0.23, 0.3)


@pytest.fixture(scope="session")
def b1():
    return build_datum("B", 1, "t", {"short": KOORNWINDER_KAPPA["short"]}, 0.3)


@pytest.fixture(scope="session")
def b2():
    return build_datum("B", 2, "t", KOORNWINDER_KAPPA, 0.3)


@pytest.fixture(scope="session")
def b2c():
    """B2 Koornwinder datum used for the c-function checks."""
    return build_datum("B", 2, "t", B2_KAPPA, 0.3)


@pytest.fixture(scope="session")
def b3():
    return build_datum("B", 3, "t", KOORNWINDER_KAPPA, 0.3)
