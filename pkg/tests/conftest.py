import pytest

from homobounds.gclosure import PhaseA
from homobounds.pairbounds import PhaseB


@pytest.fixture
def pa_half():
    """Canonical conductor pair (1, 2) at fraction 1/2."""
    return PhaseA(1.0, 2.0, 0.5)


@pytest.fixture
def pb_half():
    """Canonical density pair (1, 3) at fraction 1/2."""
    return PhaseB(1.0, 3.0, 0.5)
