import numpy as np
import pytest

from relaycontracts import TypeDistribution, TypeGrid, second_best_menu


def make_random_grid(rng, k_max=8, n_max=4):
    """Random strictly-increasing positive grid with simplex probability columns."""
    k = int(rng.integers(1, k_max + 1))
    n = int(rng.integers(1, n_max + 1))
    deltas = rng.uniform(0.5, 5.0) + np.cumsum(rng.uniform(0.2, 60.0, k))
    probs = rng.dirichlet(np.ones(k), size=n).T
    return TypeGrid(deltas, probs)


@pytest.fixture(scope="session")
def table3_grid():
    dist = TypeDistribution.uniform(50.0, 300.0)
    return TypeGrid.from_distribution(dist, 10, 16)


@pytest.fixture(scope="session")
def table3_menu(table3_grid):
    return second_best_menu(table3_grid, 1.0)


@pytest.fixture
def grid_factory():
    return make_random_grid
