"""Constructible functions on a curve diagram and their Euler integrals.

All quantities are exact integers or ``Fraction``s.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction

from .diagram import CURVES, LOOP, POINT, CurveDiagram, Marker


class NotNullHomologous(ValueError):
    pass


@dataclass(frozen=True)
class Subcomplex:
    vertices: frozenset
    edges: frozenset
    faces: frozenset
    points: frozenset = frozenset()  # isolated points inside faces, by face id

    def chi(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces) + len(self.points)

    def __and__(self, other: "Subcomplex") -> "Subcomplex":
        pts = (self.points & other.points) | {p for p in self.points if p in other.faces} | {
            p for p in other.points if p in self.faces}
        return Subcomplex(self.vertices & other.vertices, self.edges & other.edges,
                          self.faces & other.faces, frozenset(pts))

    def is_empty(self) -> bool:
        return not (self.vertices or self.edges or self.faces or self.points)


EMPTY = Subcomplex(frozenset(), frozenset(), frozenset())


@dataclass(frozen=True)
class ConstructibleFunction:
    """Face values of a curve's function; a bare point carries ``point`` instead."""

    values: tuple[int, ...]
    curve: str
    point: Marker | None = None

    @property
    def top(self) -> int:
        return 1 if self.point is not None else max(self.values, default=0)


def epsilon_of(kind: str) -> int:
    if kind == POINT:
        return 1
    if kind == LOOP:
        return -1
    raise ValueError(f"unknown curve kind {kind!r}")


def constructible_function(D: CurveDiagram, curve: str) -> ConstructibleFunction:
    """Integrate the crossing increments over the dual graph and normalize to min 0."""
    if curve not in CURVES:
        raise ValueError(f"unknown curve {curve!r}")
    if not D.curve_edges(curve):
        m = D.markers.get(curve)
        if m is None:
            raise ValueError(f"{curve} has neither labeled edges nor a marked point")
        return ConstructibleFunction((0,) * D.n_faces, curve, m)
    face = D.face_of
    # dual adjacency: crossing h from its right face to its left face
    adj: list[list[tuple[int, int]]] = [[] for _ in range(D.n_faces)]
    for h in range(D.n_half_edges):
        adj[face[h]].append((face[D.twin[h]], D.crossing_increment(h, curve)))
    val: list[int | None] = [None] * D.n_faces
    val[0] = 0
    queue = deque([0])
    while queue:
        F = queue.popleft()
        for G, inc in adj[F]:
            want = val[F] + inc
            if val[G] is None:
                val[G] = want
                queue.append(G)
            elif val[G] != want:
                raise NotNullHomologous(f"{curve} has nonzero holonomy around face {G}")
    lo = min(val)
    return ConstructibleFunction(tuple(v - lo for v in val), curve)


def face_closure(D: CurveDiagram, faces) -> Subcomplex:
    faces = frozenset(faces)
    hs = [h for h in range(D.n_half_edges) if D.face_of[h] in faces]
    return Subcomplex(frozenset(D.origin[h] for h in hs), frozenset(D.edge_key(h) for h in hs), faces)


def superlevel(D: CurveDiagram, f: ConstructibleFunction, j: int) -> Subcomplex:
    """Closed subcomplex ``{f >= j}``."""
    if j < 1:
        raise ValueError("levels start at 1")
    if f.point is not None:
        if j > 1:
            return EMPTY
        if f.point.where == "vertex":
            return Subcomplex(frozenset([f.point.index]), frozenset(), frozenset())
        return Subcomplex(frozenset(), frozenset(), frozenset(), frozenset([f.point.index]))
    return face_closure(D, (F for F, v in enumerate(f.values) if v >= j))


def sublevel_chi(D: CurveDiagram, f: ConstructibleFunction, j: int) -> int:
    return superlevel(D, f, j).chi()


def chi_of_f(D: CurveDiagram, f: ConstructibleFunction) -> int:
    return sum(sublevel_chi(D, f, j) for j in range(1, f.top + 1))


def chi_product(D: CurveDiagram, f1: ConstructibleFunction, f2: ConstructibleFunction) -> int:
    X1 = [superlevel(D, f1, j) for j in range(1, f1.top + 1)]
    X2 = [superlevel(D, f2, j) for j in range(1, f2.top + 1)]
    return sum((A & B).chi() for A in X1 for B in X2)


def chi_curve_intersection(D: CurveDiagram) -> int:
    """Euler characteristic of the common points of the two curves."""
    on = {c: {D.origin[h] for a in D.curve_edges(c) for h in (a, D.twin[a])} for c in CURVES}
    # edges carry a single label, so shared geometry is vertices only
    return len(on["c1"] & on["c2"])


def open_superlevel_chi(D: CurveDiagram, f: ConstructibleFunction, j: int) -> int:
    """Compactly supported Euler characteristic of the open region ``{f >= j}``."""
    K = superlevel(D, f, j)
    if f.point is not None:
        return K.chi()
    inside = K.faces
    face = D.face_of
    e_int = {k for k in K.edges if face[k] in inside and face[D.twin[k]] in inside}
    v_int = {v for v in K.vertices
             if all(face[h] in inside for h in D.rotation(v))}
    return len(v_int) - len(e_int) + len(inside)


def boundary_decomposition(D: CurveDiagram, f: ConstructibleFunction) -> Counter:
    """Oriented boundary half-edges of all superlevel regions, region on the left."""
    out: Counter = Counter()
    if f.point is not None:
        return out
    face = D.face_of
    for j in range(1, f.top + 1):
        for h in range(D.n_half_edges):
            if f.values[face[D.twin[h]]] >= j > f.values[face[h]]:
                out[h] += 1
    return out


def _functions(D: CurveDiagram):
    return constructible_function(D, "c1"), constructible_function(D, "c2")


def linking(D: CurveDiagram) -> Fraction:
    """``-chi(f1) chi(f2) / chi(X) + chi(f1 f2) - chi(c1 n c2) / 2``."""
    f1, f2 = _functions(D)
    return (Fraction(-chi_of_f(D, f1) * chi_of_f(D, f2), D.chi) + chi_product(D, f1, f2)
            - Fraction(chi_curve_intersection(D), 2))


def value_at_zero(D: CurveDiagram) -> Fraction:
    """Value at 0 of the continued series, ``-epsilon(c1) * linking``."""
    return -epsilon_of(D.kinds["c1"]) * linking(D)


@dataclass(frozen=True)
class LinkReport:
    chi: int
    chi_f1: int
    chi_f2: int
    chi_product: int
    chi_intersection: int
    linking: Fraction
    value_at_zero: Fraction

    @property
    def integral(self) -> bool:
        return (self.chi * self.linking).denominator == 1


def link_report(D: CurveDiagram) -> LinkReport:
    f1, f2 = _functions(D)
    L = linking(D)
    return LinkReport(D.chi, chi_of_f(D, f1), chi_of_f(D, f2), chi_product(D, f1, f2),
                      chi_curve_intersection(D), L, -epsilon_of(D.kinds["c1"]) * L)
