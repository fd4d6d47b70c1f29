import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import tritiling as tt


@pytest.fixture(scope="session")
def periodic12():
    """(spec, patch) for b=1, c=2 on a window with a healthy interior."""
    spec = tt.PeriodicSpec(1, 2)
    window = tt.Window(tt.exact(0), tt.exact(30), tt.exact(-30), tt.exact(0))
    return spec, tt.periodic_three_size(spec, window)


@pytest.fixture(scope="session")
def periodic11():
    spec = tt.PeriodicSpec(1, 1)
    window = tt.Window(tt.exact(-20), tt.exact(20), tt.exact(-20), tt.exact(20))
    return spec, tt.periodic_three_size(spec, window)


@pytest.fixture(scope="session")
def spiral10():
    spec = tt.SpiralSpec(p=(0.0, 0.0), a=(1.0, 0.0), i_min=-10, i_max=10)
    return spec, tt.klaassen_spiral(spec)


@pytest.fixture(scope="session")
def lattice1():
    window = tt.Window(tt.exact(0), tt.exact(10), tt.exact(0), tt.exact(10))
    return tt.uniform_lattice(1, window)
