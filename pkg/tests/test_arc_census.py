import math

import numpy as np
import pytest

from oracles import geod_geod_classes, point_point_lengths
from orthogeo.arc_census import (
    LengthSpectrum,
    NotPrimitive,
    Representative,
    census,
    census_geod_geod,
    census_point_geod,
    census_point_point,
    counting_function,
    read_spectrum_csv,
    spectrum_to_csv,
    window_mass,
)
from orthogeo.hyp_plane import HPoint, mobius_apply

Q1, Q2 = HPoint(0.05, 1.05), HPoint(-0.03, 0.97)
DISPLACEMENT = 2 * math.acosh(1 + math.sqrt(2))


def test_basepoint_census(G2):
    S = census_point_point(G2, G2.basepoint, G2.basepoint, 3.06)
    assert len(S) == 8
    assert np.allclose(S.lengths(), DISPLACEMENT, atol=1e-9)
    assert S.multiplicities() == [(pytest.approx(DISPLACEMENT), 8)]
    N = counting_function(S)
    assert N(3.0) == 0 and N(3.06) == 8


def test_small_and_zero_t(G2):
    assert len(census_point_point(G2, G2.basepoint, G2.basepoint, 3.0)) == 0
    assert len(census_point_point(G2, Q1, Q2, 0.0)) == 0
    a = Representative.geodesic(G2, "a")
    assert len(census_point_geod(G2, Q1, a, 0.0)) == 0
    assert len(census_geod_geod(G2, a, a, 1.0)) == 0


def test_point_point_matches_oracle(G2):
    S = census_point_point(G2, Q1, Q2, 6.0)
    want = point_point_lengths(G2, Q1.z, Q2.z, 6.0, 6)
    assert len(S) == len(want)
    assert np.max(np.abs(S.lengths() - want)) < 1e-9


def test_point_point_symmetry(G2):
    a = census_point_point(G2, Q1, Q2, 7.0).lengths()
    b = census_point_point(G2, Q2, Q1, 7.0).lengths()
    assert len(a) == len(b) and np.max(np.abs(a - b)) < 1e-9


def test_deck_invariance(G2):
    g = G2.evaluate("a")
    a = census_point_point(G2, Q1, Q2, 5.0).lengths()
    b = census_point_point(G2, mobius_apply(g, Q1), mobius_apply(g, Q2), 5.0).lengths()
    assert len(a) == len(b) and np.max(np.abs(a - b)) < 1e-9


@pytest.mark.parametrize("w1,w2", [("a", "b"), ("a", "A"), ("ab", "c")])
def test_geod_geod_matches_oracle(G2, w1, w2):
    S = census_geod_geod(G2, Representative.geodesic(G2, w1), Representative.geodesic(G2, w2), 5.0)
    got = sorted((r.length, r.start_sign, r.end_sign) for r in S.records + S.excluded)
    want = geod_geod_classes(G2, w1, w2, 5.0, 5)
    assert len(got) == len(want)
    assert max(abs(x[0] - y[0]) for x, y in zip(got, want)) < 1e-9
    assert sorted(x[1:] for x in got) == sorted(x[1:] for x in want)
    assert all(r.start_sign == r.end_sign == 1 for r in S.records)


def test_reversing_c2_negates_end_signs(G2):
    a, b = Representative.geodesic(G2, "a"), Representative.geodesic(G2, "b")
    S = census_geod_geod(G2, a, b, 5.0)
    R = census_geod_geod(G2, a, b.reversed(), 5.0)
    every = lambda X: sorted((round(r.length, 8), r.start_sign, r.end_sign) for r in X.records + X.excluded)
    assert every(R) == sorted((t, s, -e) for t, s, e in every(S))
    kept_s = sorted(round(r.length, 8) for r in S.excluded if r.start_sign == 1)
    kept_r = sorted(round(r.length, 8) for r in R.records)
    assert kept_s == kept_r


def test_point_geod_symmetric_configuration(G2):
    # rotation by pi about the basepoint normalizes the group and swaps the sides of axis(a)
    S = census_point_geod(G2, G2.basepoint, Representative.geodesic(G2, "a"), 6.0)
    assert len(S.records) == len(S.excluded) > 0


def test_point_geod_against_ball_filter(G2):
    from orthogeo.fuchsian import enumerate_ball
    from orthogeo.hyp_plane import axis, point_to_line

    c = Representative.geodesic(G2, "ab")
    S = census_point_geod(G2, Q1, c, 4.5)
    A = axis(c.oriented_element())
    dists = set()
    for h in enumerate_ball(G2, 12.0).elements:
        d = point_to_line(Q1, A.image(h))[0]
        if d <= 4.5:
            dists.add(round(d, 7))
    all_lengths = sorted(round(r.length, 7) for r in S.records + S.excluded)
    assert sorted(set(all_lengths)) == sorted(dists)


def test_geodesic_to_point_reverses(G2):
    c = Representative.geodesic(G2, "b")
    fw = census(G2, Representative.at(Q1), c, 5.0)
    bw = census(G2, c, Representative.at(Q1), 5.0)
    assert len(fw.records) + len(fw.excluded) == len(bw.records) + len(bw.excluded)
    assert all(r.start_sign == 1 and r.end_sign == 1 for r in bw.records)


def test_not_primitive(G2):
    with pytest.raises(NotPrimitive):
        census_geod_geod(G2, Representative.geodesic(G2, "aa"), Representative.geodesic(G2, "b"), 2.0)


def test_epsilon():
    assert Representative.at(HPoint(0, 1)).epsilon == 1
    assert Representative("geodesic").epsilon == -1


def test_counting_function_empty():
    S = LengthSpectrum([], 5.0, None, None)
    N = counting_function(S)
    assert N(10.0) == 0


def test_window_mass_and_csv(G2, tmp_path):
    S = census_point_point(G2, Q1, Q2, 6.0)
    L = S.lengths()
    assert window_mass(S, 4.0) == np.count_nonzero((L >= 4) & (L < 5))
    text = spectrum_to_csv(S)
    assert text.splitlines()[0] == "length,multiplicity,start_sign,end_sign"
    p = tmp_path / "s.csv"
    p.write_text(text)
    back = np.array(read_spectrum_csv(p))
    assert np.max(np.abs(back - L)) < 1e-10
    assert spectrum_to_csv(census_point_point(G2, Q1, Q2, 6.0, workers=3)) == text
