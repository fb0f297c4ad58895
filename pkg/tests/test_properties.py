import math
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from orthogeo.euler_link import TEMPLATES, fixture, linking, random_diagram, validate_diagram
from orthogeo.hyp_plane import (
    GeodesicLine,
    HPoint,
    Isometry,
    common_perpendicular,
    dist,
    mobius_apply,
    mobius_tangent,
    side_sign,
)

coord = st.floats(-3.0, 3.0, allow_nan=False)
height = st.floats(0.05, 4.0, allow_nan=False)
entry = st.floats(-2.0, 2.0, allow_nan=False)


@st.composite
def isometries(draw):
    a, b, c = draw(entry), draw(entry), draw(entry)
    d = draw(entry)
    det = a * d - b * c
    if det < 0.05:
        a, b, c, d = 1.0 + abs(a), b, 0.0, 1.0 / (1.0 + abs(a))
    return Isometry.make(a, b, c, d)


@settings(max_examples=1000, deadline=None)
@given(isometries(), coord, height, coord, height)
def test_dist_is_invariant(g, x1, y1, x2, y2):
    p, q = HPoint(x1, y1), HPoint(x2, y2)
    assert abs(dist(mobius_apply(g, p), mobius_apply(g, q)) - dist(p, q)) <= 1e-9 * max(1.0, dist(p, q))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=4, max_size=4, unique=True), isometries())
def test_perpendicular_and_side_invariance(ends, g):
    a, b, c, d = ends
    if min(abs(u - v) for u in ends for v in ends if u != v) < 0.05:
        return
    L1, L2 = GeodesicLine(a, b), GeodesicLine(c, d)
    P, Q = common_perpendicular(L1, L2), common_perpendicular(L2, L1)
    assert (P is None) == (Q is None)
    if P is None:
        return
    assert abs(P.length - Q.length) <= 1e-9
    s = side_sign(L1, P.foot1, P.dir1)
    gz = mobius_apply(g, P.foot1)
    assert side_sign(L1.image(g), gz, mobius_tangent(g, P.foot1, P.dir1)) == s


BASE = {name: linking(fixture(name)) for name in TEMPLATES}


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 40))
def test_random_subdivisions_preserve_linking(seed, moves):
    name, D = random_diagram(random.Random(seed), n_moves=moves)
    assert validate_diagram(D) == []
    L = linking(D)
    assert L == BASE[name] == linking(D.swapped())
    assert (D.chi * L).denominator == 1
