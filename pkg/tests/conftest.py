import numpy as np
import pytest

from zenogate.spectral import three_level_generators, three_level_projectors


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def gens():
    """Three-level rotation generators at reference angle 0."""
    return three_level_generators(0.0)


@pytest.fixture(scope="session")
def projs0():
    """(rank-2, rank-1) projectors of the three-level model at angle 0."""
    return three_level_projectors(0.0)
