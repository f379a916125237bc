import numpy as np
import pytest

from orbemu.kinematics import ChainLink, Pose, SerialChain

Z = np.array([0.0, 0.0, 1.0])


def planar_2r(m1=0.0, m2=0.0, com2=(1.0, 0.0, 0.0)) -> SerialChain:
    """Two unit links in the xy plane, both joints about z."""
    return SerialChain(
        links=[
            ChainLink(Pose.identity(), Z, mass=m1),
            ChainLink(Pose(np.array([1.0, 0.0, 0.0])), Z, mass=m2, com=np.asarray(com2)),
        ],
        tcp_offset=Pose(np.array([1.0, 0.0, 0.0])),
    )


@pytest.fixture
def planar_chain():
    return planar_2r()


@pytest.fixture
def rng():
    return np.random.default_rng(42)
