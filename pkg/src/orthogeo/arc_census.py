"""Orthogeodesic arcs between two representatives on a closed hyperbolic surface.

A representative is either a point or an oriented closed geodesic given by
a group element. Arcs are enumerated in the universal cover: lifts of the
second representative are images under group elements, and each arc on the
surface corresponds to one orbit of such lifts.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fuchsian import (
    SurfaceGroup,
    cluster,
    DEFAULT_CAP,
    double_coset_classes,
    enumerate_ball,
    find_word,
)
from .hyp_plane import (
    HPoint,
    Isometry,
    axis,
    dist,
    mobius_apply,
    point_to_line,
    side_sign,
    translation_length,
)

MERGE_TOL = 1e-7


class NotPrimitive(ValueError):
    pass


@dataclass(frozen=True)
class Representative:
    kind: str  # "point" or "geodesic"
    point: HPoint | None = None
    element: Isometry | None = None
    word: str | None = None
    orientation: int = 1

    @classmethod
    def at(cls, q: HPoint) -> "Representative":
        return cls("point", point=q)

    @classmethod
    def geodesic(cls, G: SurfaceGroup, word: str, orientation: int = 1) -> "Representative":
        g = G.evaluate(word)
        if not g.is_hyperbolic():
            raise ValueError(f"word {word!r} is not a hyperbolic element")
        return cls("geodesic", element=g, word=word, orientation=orientation)

    @property
    def epsilon(self) -> int:
        return 1 if self.kind == "point" else -1

    def oriented_element(self) -> Isometry:
        """The element translating along the representative in its direction."""
        if self.kind != "geodesic":
            raise ValueError("points carry no group element")
        return self.element if self.orientation > 0 else self.element.inverse()

    def oriented_word(self) -> str:
        return self.word if self.orientation > 0 else self.word[::-1].swapcase()

    def reversed(self) -> "Representative":
        return Representative(self.kind, self.point, self.element, self.word, -self.orientation)

    def describe(self) -> str:
        if self.kind == "point":
            return f"point:{self.point.x!r},{self.point.y!r}"
        return f"geodesic:{self.oriented_word()}"


def check_primitive(G: SurfaceGroup, rep: Representative) -> None:
    """Raise ``NotPrimitive`` if the element has a proper root in the group."""
    g = rep.element
    ell = translation_length(g)
    A = axis(g)
    r = point_to_line(G.basepoint, A)[0]
    ball = enumerate_ball(G, 2.0 * r + 0.5 * ell + 1e-6)
    for h in ball.elements:
        if not h.is_hyperbolic():
            continue
        p = ell / translation_length(h)
        k = round(p)
        if k >= 2 and abs(p - k) < 1e-6 and axis(h).same_set(A, 1e-7):
            raise NotPrimitive(f"element is a {k}-th power")


@dataclass(frozen=True)
class ArcRecord:
    length: float
    coset_witness: Isometry
    start_sign: int
    end_sign: int
    word: str = ""


@dataclass
class LengthSpectrum:
    records: list[ArcRecord]
    t_max: float
    rep1: Representative
    rep2: Representative
    # arcs that are orthogonal but fail the direct-orientation test
    excluded: list[ArcRecord] = field(default_factory=list)
    explored: int = 0  # group elements examined

    def lengths(self) -> np.ndarray:
        return np.array([r.length for r in self.records], dtype=float)

    def __len__(self):
        return len(self.records)

    def multiplicities(self) -> list[tuple[float, int]]:
        """Distinct lengths (merged within 1e-7) with their multiplicities."""
        out: list[tuple[float, int]] = []
        for r in self.records:
            if out and r.length - out[-1][0] <= MERGE_TOL:
                out[-1] = (out[-1][0], out[-1][1] + 1)
            else:
                out.append((r.length, 1))
        return out


def _sorted_records(recs: list[ArcRecord]) -> list[ArcRecord]:
    return sorted(recs, key=lambda r: (r.length, len(r.word), r.word))


def _ball_for(G: SurfaceGroup, radius: float, workers: int, cap: int):
    return enumerate_ball(G, max(radius, 0.0) + 1e-9, cap=cap, workers=workers)


def census_point_point(G: SurfaceGroup, q1: HPoint, q2: HPoint, T: float, workers: int = 1,
                       cap: int = DEFAULT_CAP) -> LengthSpectrum:
    rep1, rep2 = Representative.at(q1), Representative.at(q2)
    if T <= 0:
        return LengthSpectrum([], T, rep1, rep2)
    o = G.basepoint
    ball = _ball_for(G, T + dist(o, q1) + dist(o, q2), workers, cap)
    M = np.array([h.entries() for h in ball.elements])
    z2 = complex(q2.x, q2.y)
    w = (M[:, 0] * z2 + M[:, 1]) / (M[:, 2] * z2 + M[:, 3])
    num = np.abs(w - complex(q1.x, q1.y))
    d = 2.0 * np.arcsinh(num / (2.0 * np.sqrt(q1.y * w.imag)))
    recs = [ArcRecord(float(d[i]), ball.elements[i], 1, 1, ball.words[i])
            for i in np.flatnonzero((d > 1e-12) & (d <= T))]
    return LengthSpectrum(_sorted_records(recs), T, rep1, rep2, explored=len(ball))


def census_geod_geod(G: SurfaceGroup, c1: Representative, c2: Representative, T: float,
                     workers: int = 1, check: bool = True, cap: int = DEFAULT_CAP) -> LengthSpectrum:
    if c1.kind != "geodesic" or c2.kind != "geodesic":
        raise ValueError("both representatives must be closed geodesics")
    if check:
        check_primitive(G, c1)
        check_primitive(G, c2)
    if T <= 0:
        return LengthSpectrum([], T, c1, c2)
    classes, _ = double_coset_classes(G, c1.oriented_element(), c2.oriented_element(), T,
                                      c1.oriented_word(), c2.oriented_word(), workers=workers, cap=cap)
    kept, dropped = [], []
    for c in classes:
        rec = ArcRecord(c.perp.length, c.rep, c.start_sign, c.end_sign, c.word)
        (kept if c.start_sign > 0 and c.end_sign > 0 else dropped).append(rec)
    return LengthSpectrum(_sorted_records(kept), T, c1, c2, _sorted_records(dropped))


def census_point_geod(G: SurfaceGroup, q: HPoint, c2: Representative, T: float,
                      workers: int = 1, check: bool = True, cap: int = DEFAULT_CAP) -> LengthSpectrum:
    rep1 = Representative.at(q)
    if c2.kind != "geodesic":
        raise ValueError("second representative must be a closed geodesic")
    if check:
        check_primitive(G, c2)
    if T <= 0:
        return LengthSpectrum([], T, rep1, c2)
    g2 = c2.oriented_element()
    A2 = axis(g2)
    o = G.basepoint
    radius = T + dist(o, q) + point_to_line(o, A2)[0] + 0.5 * translation_length(g2)
    ball = _ball_for(G, radius, workers, cap)
    cands = []
    for h, w in zip(ball.elements, ball.words):
        line = A2.image(h)
        d, foot, toward_q = point_to_line(q, line)
        if d <= 1e-12 or d > T:
            continue
        es = side_sign(line, foot, -toward_q)
        cands.append((d, foot, es, h, w))
    keys = [(float(c[2]), c[0], c[1].x, math.log(c[1].y)) for c in cands]
    kept, dropped = [], []
    for grp in cluster(keys, 1e-6):
        best = min(grp, key=lambda i: (len(cands[i][4]), cands[i][4]))
        d, _, es, h, w = cands[best]
        rec = ArcRecord(d, h, 1, es, w)
        (kept if es > 0 else dropped).append(rec)
    return LengthSpectrum(_sorted_records(kept), T, rep1, c2, _sorted_records(dropped))


def census(G: SurfaceGroup, c1: Representative, c2: Representative, T: float, workers: int = 1,
                       cap: int = DEFAULT_CAP) -> LengthSpectrum:
    """Dispatch on the representative kinds."""
    if c1.kind == "point" and c2.kind == "point":
        return census_point_point(G, c1.point, c2.point, T, workers, cap)
    if c1.kind == "point":
        return census_point_geod(G, c1.point, c2, T, workers, cap=cap)
    if c2.kind == "point":
        # arcs from a geodesic to a point are the reversed point-to-geodesic arcs;
        # reversing the arc negates its velocity at the geodesic end
        back = census_point_geod(G, c2.point, c1, T, workers, cap=cap)
        every = [ArcRecord(r.length, r.coset_witness.inverse(), -r.end_sign, 1, r.word[::-1].swapcase())
                 for r in back.records + back.excluded]
        kept = [r for r in every if r.start_sign > 0]
        dropped = [r for r in every if r.start_sign < 0]
        return LengthSpectrum(_sorted_records(kept), T, c1, c2, _sorted_records(dropped))
    return census_geod_geod(G, c1, c2, T, workers, cap=cap)


# ---------------------------------------------------------------- counting function

@dataclass
class StepFunction:
    """Right-continuous counting function given by its jumps."""

    jumps: np.ndarray
    counts: np.ndarray  # cumulative count at each jump

    def __call__(self, T) -> np.ndarray | int:
        idx = np.searchsorted(self.jumps, T, side="right")
        vals = np.concatenate(([0], self.counts))[idx]
        return int(vals) if np.ndim(vals) == 0 else vals


def counting_function(S: LengthSpectrum) -> StepFunction:
    mult = S.multiplicities()
    if not mult:
        return StepFunction(np.empty(0), np.empty(0, dtype=int))
    jumps = np.array([t for t, _ in mult])
    counts = np.cumsum([m for _, m in mult])
    return StepFunction(jumps, counts)


def window_mass(S: LengthSpectrum, T: float) -> int:
    """Number of arcs with length in ``[T, T + 1)``."""
    L = S.lengths()
    return int(np.count_nonzero((L >= T) & (L < T + 1.0)))


# ---------------------------------------------------------------- CSV

CSV_HEADER = ["length", "multiplicity", "start_sign", "end_sign"]


def spectrum_rows(S: LengthSpectrum) -> list[tuple[str, int, int, int]]:
    rows: list[list] = []
    for r in S.records:
        if rows and r.length - rows[-1][0] <= MERGE_TOL and rows[-1][2:] == [r.start_sign, r.end_sign]:
            rows[-1][1] += 1
        else:
            rows.append([r.length, 1, r.start_sign, r.end_sign])
    return [(f"{t:.12g}", m, s, e) for t, m, s, e in rows]


def spectrum_to_csv(S: LengthSpectrum) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(spectrum_rows(S))
    return buf.getvalue()


def read_spectrum_csv(path) -> list[float]:
    """Expand a spectrum CSV into the sorted list of lengths (with multiplicity)."""
    out: list[float] = []
    with open(Path(path), newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or reader.fieldnames[:2] != CSV_HEADER[:2]:
            raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}")
        for row in reader:
            out.extend([float(row["length"])] * int(row["multiplicity"]))
    return sorted(out)
