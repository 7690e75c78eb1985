import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hypersel.ordinal import OMEGA, parse_ordinal
from hypersel.space import Space
from hypersel.selection import FamilyParams
from hypersel.decomp import point_decomposition
from hypersel.basebuilder import decomp_to_extreme_selection

W = OMEGA
W2 = parse_ordinal("w*2")
WSQ = parse_ordinal("w^2")


@pytest.fixture(scope="session")
def omega_space():
    return Space([W])


@pytest.fixture(scope="session")
def omega2_space():
    return Space([W2])


@pytest.fixture(scope="session")
def omega_sq_space():
    return Space([WSQ])


@pytest.fixture(scope="session")
def wedge_space():
    return Space([W, W], [[(0, W), (1, W)]])


@pytest.fixture(scope="session")
def fan_space():
    return Space([W, W, W], [[(0, W), (1, W), (2, W)]])


@pytest.fixture(scope="session")
def wedge_maximal(wedge_space):
    hub = wedge_space.point(0, W)
    d = point_decomposition(wedge_space, hub)
    return decomp_to_extreme_selection(d, hub, "maximal", FamilyParams(grid_k=3))


@pytest.fixture(scope="session")
def wedge_minimal(wedge_space):
    hub = wedge_space.point(0, W)
    d = point_decomposition(wedge_space, hub)
    return decomp_to_extreme_selection(d, hub, "minimal", FamilyParams(grid_k=3))


@pytest.fixture(scope="session")
def omega2_maximal(omega2_space):
    top = omega2_space.point(0, W2)
    d = point_decomposition(omega2_space, top)
    return decomp_to_extreme_selection(d, top, "maximal", FamilyParams(grid_k=4))


@pytest.fixture(scope="session")
def omega_sq_maximal(omega_sq_space):
    top = omega_sq_space.point(0, WSQ)
    d = point_decomposition(omega_sq_space, top)
    return decomp_to_extreme_selection(d, top, "maximal", FamilyParams(grid_k=3))
