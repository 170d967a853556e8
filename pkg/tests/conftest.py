from fractions import Fraction

import pytest

from hillvar import build_table, majorant_table, reduce_params
from hillvar.reference import LUNAR_M


@pytest.fixture(scope="session")
def lunar_m():
    return LUNAR_M


@pytest.fixture(scope="session")
def lunar_lam():
    return LUNAR_M * LUNAR_M


@pytest.fixture(scope="session")
def lunar_params(lunar_m, lunar_lam):
    return reduce_params(lunar_m, lunar_lam)


@pytest.fixture(scope="session")
def lunar_table3(lunar_m):
    return build_table(lunar_m, 3)


@pytest.fixture(scope="session")
def lunar_table12(lunar_m):
    return build_table(lunar_m, 12)


@pytest.fixture(scope="session")
def twelfth_table8():
    return build_table(Fraction(1, 12), 8)


@pytest.fixture(scope="session")
def lunar_majorant8(lunar_m):
    return majorant_table(lunar_m, 8)
