import math

import numpy as np
import pytest

from quatstft.fixtures import random_combos
from quatstft.quadrature import default_time_grid

NU = 2 * math.pi


@pytest.fixture(scope="session")
def tgrid():
    return default_time_grid()


@pytest.fixture(scope="session")
def combos():
    return random_combos(4, 4, NU, seed=7)


def qclose(a, b, atol):
    a = np.asarray(getattr(a, "as_array", lambda: a)(), dtype=float)
    b = np.asarray(getattr(b, "as_array", lambda: b)(), dtype=float)
    return float(np.max(np.abs(a - b))) <= atol
