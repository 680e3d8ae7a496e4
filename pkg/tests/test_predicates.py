from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from robinhom.mesh.predicates import incircle, orient2d

coords = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def sign(v):
    return (v > 0) - (v < 0)


def exact_orient(ax, ay, bx, by, cx, cy):
    F = Fraction
    return sign((F(bx) - F(ax)) * (F(cy) - F(ay)) - (F(by) - F(ay)) * (F(cx) - F(ax)))


def exact_incircle(ax, ay, bx, by, cx, cy, dx, dy):
    F = Fraction
    rows = []
    for px, py in ((ax, ay), (bx, by), (cx, cy)):
        u, v = F(px) - F(dx), F(py) - F(dy)
        rows.append((u, v, u * u + v * v))
    (a, b, c), (d, e, f), (g, h, i) = rows
    return sign(a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g))


def test_orient_basic():
    assert orient2d(0, 0, 1, 0, 0, 1) > 0
    assert orient2d(0, 0, 0, 1, 1, 0) < 0
    assert orient2d(0, 0, 1, 1, 2, 2) == 0


def test_incircle_basic():
    assert incircle(0, 0, 1, 0, 0, 1, 0.25, 0.25) > 0
    assert incircle(0, 0, 1, 0, 0, 1, 3, 3) < 0
    assert incircle(0, 0, 1, 0, 0, 1, 1, 1) == 0


def test_orient_near_degenerate():
    # points on the line y = x perturbed by one ulp
    base = 0.5
    for k in range(1, 50):
        x = base + k * 2.0 ** -53
        assert sign(orient2d(0.5, 0.5, 12.0, 12.0, x, x)) == 0
        y = x + 2.0 ** -53
        assert sign(orient2d(0.5, 0.5, 12.0, 12.0, x, y)) == exact_orient(
            0.5, 0.5, 12.0, 12.0, x, y)


@given(coords, coords, coords, coords, coords, coords)
@settings(max_examples=300, deadline=None)
def test_orient_matches_exact(ax, ay, bx, by, cx, cy):
    assert sign(orient2d(ax, ay, bx, by, cx, cy)) == exact_orient(ax, ay, bx, by, cx, cy)


@given(st.floats(0, 1), st.floats(0, 1), st.integers(-3, 3))
@settings(max_examples=300, deadline=None)
def test_orient_collinear_perturbed(s, t, k):
    # c lies close to the segment a-b; the filter must fall back correctly
    ax, ay, bx, by = 0.1, 0.3, 0.7, 0.9
    cx = ax + s * (bx - ax)
    cy = ay + s * (by - ay) + k * 1e-17 * t
    assert sign(orient2d(ax, ay, bx, by, cx, cy)) == exact_orient(ax, ay, bx, by, cx, cy)


@given(st.lists(coords, min_size=8, max_size=8))
@settings(max_examples=300, deadline=None)
def test_incircle_matches_exact(p):
    assert sign(incircle(*p)) == exact_incircle(*p)


@pytest.mark.parametrize("k", range(8))
def test_incircle_cocircular_points(k):
    import math
    # points on a circle of radius 1/64 rounded to floats: sign must be exact
    r, cx, cy = 1 / 64, 0.25, 0.75
    pts = [(cx + r * math.cos(2 * math.pi * j / 16), cy + r * math.sin(2 * math.pi * j / 16))
           for j in range(16)]
    a, b, c, d = pts[k], pts[k + 3], pts[k + 7], pts[(k + 11) % 16]
    args = (*a, *b, *c, *d)
    assert sign(incircle(*args)) == exact_incircle(*args)
