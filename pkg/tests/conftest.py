import numpy as np
import pytest

from sldirichlet.potential import PotentialSpec

ACCEPTANCE_LINES = []


def record(criterion: str, passed: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def bump(x):
    # x^2 (1-x)^2 has matching values and first derivatives at 0 and 1; mean 1/30
    return x**2 * (1 - x) ** 2 - 1.0 / 30.0


@pytest.fixture(scope="session")
def zero():
    return PotentialSpec.zero()


@pytest.fixture(scope="session")
def cos2():
    return PotentialSpec.cosines({2: 1.0})


@pytest.fixture(scope="session")
def cos24():
    return PotentialSpec.cosines({2: 1.0, 4: 0.5})


@pytest.fixture(scope="session")
def bump_grid():
    return PotentialSpec.from_function(bump, 4097)


ADMISSIBLE_COSINES = [
    {2: 1.0},
    {2: 1.0, 4: 0.5},
    {2: 1.0, 4: 0.5, 8: 0.25},
    {1: 1.0, 3: -1.0},
    {2: 0.7, 6: -0.4, 8: 0.9},
    {1: 0.5, 3: 0.3, 5: -0.6, 7: -0.2},
]


def pi2(m):
    return (m * np.pi) ** 2
