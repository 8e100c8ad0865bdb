import pytest
from hypothesis import settings, strategies as st

from ermrev import quadrilateral, triangular, truncated_equal_revenue
from ermrev.experiments import random_regular_curve

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def ter():
    """Equal-revenue distribution truncated at 10."""
    return truncated_equal_revenue(10)


@pytest.fixture
def ident():
    return triangular(1)


@pytest.fixture
def quad():
    return quadrilateral(0.1, 0.22)


def curves(max_pieces=16):
    return st.builds(random_regular_curve, st.integers(0, 2**32 - 1), st.integers(1, max_pieces))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
