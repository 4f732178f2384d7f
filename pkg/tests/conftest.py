import numpy as np
import pytest

from expectile_sets import ConeSpec, WeightedSample

from .helpers import WORKED_POINTS

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def worked():
    return WeightedSample.from_points(WORKED_POINTS)


@pytest.fixture
def orthant2():
    return ConeSpec.orthant(2)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def criterion():
    def record(name, ok, detail=""):
        ACCEPTANCE_RESULTS.append((name, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
