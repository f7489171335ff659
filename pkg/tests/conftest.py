import sys

import pytest

from copan.cop import synthetic_series
from copan.mocks import MockModel, NegamaxEngine


def pytest_addoption(parser):
    parser.addoption("--run-integration", action="store_true", default=False,
                     help="run the engine-equipped integration tier")


def mock_engine_cmd(*extra: str) -> list[str]:
    return [sys.executable, "-m", "copan", "mock-engine", *extra]


def line_costs(n: int = 216, intercept: float = 12.0, slope: float = -0.05):
    return [intercept + slope * i for i in range(n)]


@pytest.fixture
def negamax_engine():
    return NegamaxEngine(MockModel())


@pytest.fixture
def line_series():
    return synthetic_series(line_costs())


@pytest.fixture
def fig1_series():
    """Line plus one two-sided fight (75..88) and one one-sided forcing
    sequence on black's turns only (130, 132, 134, 136)."""
    costs = line_costs()
    for i in range(75, 89):
        costs[i] += 6.0
    for i in (130, 132, 134, 136):
        costs[i] += 6.0
    return synthetic_series(costs)


@pytest.fixture
def fig3_series():
    """Line with an elevated run ending at index 236."""
    costs = line_costs(250)
    for i in range(228, 237):
        costs[i] += 6.0
    return synthetic_series(costs)
