import pytest

from totient_forest import (
    NATURALS_BOUND,
    SQUARES_BOUND,
    cubes,
    derive_polynomial_bound,
    grow_forest,
    naturals,
    squares,
)

_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Call with (criterion, ok, detail); lines are printed in the terminal summary."""

    def record(criterion, ok, detail=""):
        _ACCEPTANCE.append((criterion, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {criterion}  {detail}")


@pytest.fixture(scope="session")
def naturals_forest():
    return grow_forest(naturals(), NATURALS_BOUND, height_cap=300)


@pytest.fixture(scope="session")
def squares_forest():
    # heights up to 200 are fully materialized for every tree
    return grow_forest(squares(), SQUARES_BOUND, height_cap=200)


@pytest.fixture(scope="session")
def cube_bound():
    return derive_polynomial_bound(cubes())


@pytest.fixture(scope="session")
def cube_forest(cube_bound):
    return grow_forest(cubes(), cube_bound, height_cap=1000, node_cap=200_000)
