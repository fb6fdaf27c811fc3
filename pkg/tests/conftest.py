import pytest

from steinlab.ash import build_ash_complex
from steinlab.building import TitsBuilding

ACCEPTANCE_GRID = [(2, 2), (2, 3), (2, 5), (3, 2), (3, 3)]


@pytest.fixture(scope="session")
def buildings():
    pairs = ACCEPTANCE_GRID + [(4, 2)]
    return {np: TitsBuilding(*np) for np in pairs}


@pytest.fixture(scope="session")
def ash_complexes():
    pairs = ACCEPTANCE_GRID + [(4, 2)]
    return {np: build_ash_complex(*np) for np in pairs}
