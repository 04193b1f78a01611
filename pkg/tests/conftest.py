import pytest

from richelot_ctp.curve import build_pair


@pytest.fixture(scope="session")
def curve113():
    """The reference curve: y^2 = (x+226) x (x-678) (x+113) (x-791)."""
    return build_pair(1,
                      [226, 1],
                      [0, -678, 1],
                      [-7 * 113 ** 2, -678, 1])


@pytest.fixture(scope="session")
def toy_curve():
    """y^2 = x (x^2-1) (x^2-4); Delta = -3, codomain quadratics irrational."""
    return build_pair(1, [0, 1], [-1, 0, 1], [-4, 0, 1])
