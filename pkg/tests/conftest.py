import pytest

from robinhom.geometry import DomainSpec, MicrostructureSpec, holes_for
from robinhom.mesh import mesh_perforated

UNIT = DomainSpec()

# epsilon -> number of inclusions on the unit square; None means no holes
HOLE_CASES = {0: None, 1: 0.25, 9: 0.125, 49: 0.0625}


def holes_with(k):
    eps = HOLE_CASES[k]
    return [] if eps is None else holes_for(MicrostructureSpec(eps))


@pytest.fixture(scope="session")
def perforated_meshes():
    cache = {}

    def get(k, h_far=1 / 32):
        key = (k, h_far)
        if key not in cache:
            cache[key] = mesh_perforated(UNIT, holes_with(k), h_far, 16)
        return cache[key]

    return get


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
