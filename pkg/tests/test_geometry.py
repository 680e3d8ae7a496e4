import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from robinhom.errors import ValidationError
from robinhom.geometry import (DomainSpec, Lattice, MicrostructureSpec, build_lattice,
                               finite_S, hole_radius, holes_for, limit_S,
                               point_in_perforated_domain)


def brute_force_lattice(eps, domain):
    """Enumerate 2 eps Z^2 over a generous index window."""
    kmax = int(math.ceil(max(abs(b) for pair in domain.bounds for b in pair) / (2 * eps))) + 2
    out = []
    for i, j in itertools.product(range(-kmax, kmax + 1), repeat=2):
        p = (2 * eps * i, 2 * eps * j)
        if domain.contains(p) and domain.boundary_distance(p) >= eps * (1 - 1e-12):
            out.append(p)
    return sorted(out)


@pytest.mark.parametrize("eps, expected", [
    (0.25, [(0.5, 0.5)]),
    (0.125, [(x, y) for x in (0.25, 0.5, 0.75) for y in (0.25, 0.5, 0.75)]),
    (0.6, []),
])
def test_lattice_examples(eps, expected):
    lat = build_lattice(MicrostructureSpec(eps) if eps < 0.5 else
                        MicrostructureSpec(eps, radius_coefficient=0.1))
    assert list(lat.centers) == expected


@pytest.mark.parametrize("eps", [0.25, 0.125, 0.0625, 1 / 32, 0.1, 0.07])
@pytest.mark.parametrize("domain", [DomainSpec(), DomainSpec(-0.3, 1.1, 0.2, 0.9)])
def test_lattice_matches_enumeration(eps, domain):
    lat = build_lattice(MicrostructureSpec(eps, domain=domain))
    assert list(lat.centers) == brute_force_lattice(eps, domain)


@given(st.floats(0.01, 0.3), st.floats(-1, 1), st.floats(0.5, 2))
@settings(max_examples=60, deadline=None)
def test_lattice_points_respect_distance(eps, x0, width):
    domain = DomainSpec(x0, x0 + width, 0.0, 1.0)
    lat = build_lattice(MicrostructureSpec(eps, domain=domain))
    for c in lat:
        assert domain.boundary_distance(c) >= eps * (1 - 1e-12)
    assert list(lat.centers) == sorted(lat.centers)


def test_three_dimensional_lattice():
    lat = build_lattice(MicrostructureSpec(0.125, dimension=3))
    assert len(lat) == 27
    assert all(len(c) == 3 for c in lat)


@pytest.mark.parametrize("N, eps, expected", [
    (2, 0.1, 0.01), (3, 0.04, 0.008), (2, 0.125, 0.015625)])
def test_hole_radius(N, eps, expected):
    assert hole_radius(MicrostructureSpec(eps, dimension=N)) == pytest.approx(expected, rel=1e-14)


def test_radius_must_stay_below_epsilon():
    with pytest.raises(ValidationError) as info:
        MicrostructureSpec(0.5, radius_coefficient=3.0)
    assert info.value.key == "radius_coefficient"


@pytest.mark.parametrize("bad", [dict(epsilon=0.0), dict(epsilon=0.1, alpha=-1.0),
                                 dict(epsilon=0.1, dimension=1)])
def test_spec_rejects_invalid(bad):
    with pytest.raises(ValidationError):
        MicrostructureSpec(**bad)


def test_finite_S_examples():
    nine = build_lattice(MicrostructureSpec(0.125))
    one = build_lattice(MicrostructureSpec(0.25))
    assert finite_S(nine, 0.015625, 2) == 0.140625
    assert finite_S(one, 0.0625, 2) == 0.0625
    assert finite_S(Lattice((), 0.6), 0.01, 2) == 0


@pytest.mark.parametrize("c_r, expected", [(1.0, 0.25), (0.5, 0.125)])
def test_limit_S(c_r, expected):
    assert limit_S(MicrostructureSpec(0.1, radius_coefficient=c_r)) == expected


def test_finite_S_approaches_limit_from_below():
    values = []
    for eps in (1 / 8, 1 / 16, 1 / 32, 1 / 64):
        spec = MicrostructureSpec(eps)
        values.append(finite_S(build_lattice(spec), hole_radius(spec), 2))
    assert all(a < b for a, b in zip(values, values[1:]))
    assert all(v < 0.25 for v in values)
    assert 1 - values[-1] / 0.25 < 0.13
    # per-axis count 1/(2 eps) - 1 gives the exact gap 1 - (1 - 2 eps)^2
    assert 1 - values[-1] / 0.25 == pytest.approx(1 - (1 - 2 / 64) ** 2, rel=1e-12)


def test_point_in_perforated_domain():
    lat = build_lattice(MicrostructureSpec(0.25))
    assert not point_in_perforated_domain((0.5, 0.5), lat, 0.0625)
    assert point_in_perforated_domain((0.9, 0.9), lat, 0.0625)
    assert not point_in_perforated_domain((0.5625, 0.5), lat, 0.0625)
    assert not point_in_perforated_domain((1.2, 0.5), lat, 0.0625)


def test_holes_for():
    spec = MicrostructureSpec(0.125)
    holes = holes_for(spec)
    assert len(holes) == 9
    assert all(h.radius == 0.015625 for h in holes)


def test_domain_validation():
    with pytest.raises(ValidationError):
        DomainSpec(1.0, 0.0)
    assert DomainSpec(0, 2, 0, 3).area == 6
    assert DomainSpec.unit_box(3).dimension == 3
