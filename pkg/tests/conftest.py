import numpy as np
import pytest

from qtorus.theta_rep import ThetaPoint
from qtorus.weyl_algebra import PlanckParameter, random_element


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def random_pair(rng):
    def draw(n: int, terms: int = 4, degree: int = 3):
        planck = PlanckParameter(n)
        return random_element(planck, rng, terms, degree), random_element(planck, rng, terms, degree)
    return draw


@pytest.fixture
def random_thetas(rng):
    def draw(count: int):
        return [ThetaPoint(*rng.random(2)) for _ in range(count)]
    return draw
