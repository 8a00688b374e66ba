import numpy as np
import pytest

from trizone import build_family


@pytest.fixture(scope="session")
def ex51():
    """Family point with a repelling two-zone cycle plus a three-zone cycle."""
    return build_family(a1=1.0, c11=-1.4, a11=-1.0, d2=4.0,
                        epsilon=0.21, b2=-1.09)


@pytest.fixture(scope="session")
def ex52():
    """Mirror-stability family point: attracting two-zone cycle."""
    return build_family(a1=-0.8, c11=1.4, a11=0.8, d2=4.0,
                        epsilon=0.43, b2=-1.09)


@pytest.fixture(scope="session")
def ex51_center():
    return build_family(a1=1.0, c11=-1.4, a11=-1.0, d2=4.0,
                        epsilon=0.0, b2=-1.0)


@pytest.fixture(scope="session")
def ex52_center():
    return build_family(a1=-0.8, c11=1.4, a11=0.8, d2=4.0,
                        epsilon=0.0, b2=-1.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
