import numpy as np
import pytest

from framepovm import Frame, FusionFrame, InstanceGenerator

E1 = np.array([1.0, 0.0])
E2 = np.array([0.0, 1.0])


@pytest.fixture
def gen():
    return InstanceGenerator(seed=20260810)


@pytest.fixture
def repeated_frame():
    """The {e1, e1, e2} frame in C^2."""
    return Frame(2, [E1, E1, E2])


@pytest.fixture
def mercedes_frame():
    """Three unit vectors at 120 degrees in the real plane of C^2."""
    return Frame(
        2,
        [
            [1.0, 0.0],
            [-0.5, np.sqrt(3.0) / 2.0],
            [-0.5, -np.sqrt(3.0) / 2.0],
        ],
    )


@pytest.fixture
def fusion_c3():
    """Two weighted subspaces of C^3: span{e1,e2} with weight 1, span{e3} with weight 2."""
    return FusionFrame(
        3,
        [
            (np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]), 1.0),
            (np.array([[0.0], [0.0], [1.0]]), 2.0),
        ],
    )


@pytest.fixture
def ons_frame():
    """The coordinate orthonormal basis of C^2."""
    return Frame(2, [E1, E2])
