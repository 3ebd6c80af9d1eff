import numpy as np
import pytest

from su2tomo import HalfInteger

# j = 0, 1/2, ..., 5
ALL_J = [HalfInteger(tj) for tj in range(0, 11)]
NONZERO_J = ALL_J[1:]
SMALL_J = [HalfInteger(tj) for tj in range(0, 7)]


def j_id(j):
    return f"j{j}".replace("/", "_")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_points(rng, count):
    from su2tomo import SpherePoint

    theta = np.arccos(rng.uniform(-1, 1, count))
    phi = rng.uniform(0, 2 * np.pi, count)
    return [SpherePoint(t, p) for t, p in zip(theta, phi)]


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(number: int, ok: bool, text: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {text}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
