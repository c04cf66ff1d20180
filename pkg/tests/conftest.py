import numpy as np
import pytest

from wirespin import PhysicalConstants


@pytest.fixture(scope="session")
def consts() -> PhysicalConstants:
    return PhysicalConstants()


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240811)
