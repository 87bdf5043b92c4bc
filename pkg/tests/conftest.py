import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from spectral_barron import make_grid

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def grid_1d():
    return make_grid(1, 12.0, 481)


@pytest.fixture(scope="session")
def grid_small():
    return make_grid(1, 10.0, 201)


@pytest.fixture(scope="session")
def grid_2d():
    return make_grid(2, 8.0, 65)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion and print it."""
    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        CRITERIA[number] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[n])
