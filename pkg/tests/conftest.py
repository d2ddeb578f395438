import numpy as np
import pytest

import bolab


@pytest.fixture(scope="session")
def grid():
    """Default laboratory resolution: L = 256, n = 4096."""
    return bolab.default_grid()


@pytest.fixture(scope="session")
def soliton_field(grid):
    """Q_{-1/2,0}(x) = 2 / (1 + x^2)."""
    return bolab.single_soliton(-0.5, 0.0, grid)


@pytest.fixture(scope="session")
def soliton_system(soliton_field):
    return bolab.assemble(soliton_field, 1024)


@pytest.fixture(scope="session")
def soliton_data(soliton_system):
    return bolab.eigensolve(soliton_system)


@pytest.fixture(scope="session")
def pair_config():
    return bolab.SolitonConfig(np.array([-1.0, -0.5]), np.array([-10.0, 10.0]))


@pytest.fixture(scope="session")
def pair_field(grid, pair_config):
    return bolab.profile(pair_config, grid)


@pytest.fixture(scope="session")
def pair_system(pair_field):
    return bolab.assemble(pair_field, 1024)


@pytest.fixture(scope="session")
def pair_data(pair_system):
    return bolab.eigensolve(pair_system)
