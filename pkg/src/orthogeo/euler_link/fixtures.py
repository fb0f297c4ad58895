"""Diagram builders: a closed surface from its polygon, plus local moves.

Moves used by the generators never change the topology of the surface or of
the curves: they subdivide edges, add chords inside a face, or hang a new
vertex into a face.
"""

from __future__ import annotations

import random

from .diagram import CURVES, LOOP, POINT, CurveDiagram, Marker


class MapBuilder:
    def __init__(self):
        self.origin: list[int] = []
        self.twin: list[int] = []
        self.nxt: list[int] = []
        self.n_vertices = 0
        self.along: dict[int, tuple[str, int]] = {}  # any half-edge of the edge -> label
        self.kinds = {"c1": POINT, "c2": POINT}
        self.marked: dict[str, int | None] = {"c1": None, "c2": None}  # half-edge on the face

    # -- basic queries
    def prev(self, h: int) -> int:
        p = h
        while self.nxt[p] != h:
            p = self.nxt[p]
        return p

    def face_walk(self, h: int) -> list[int]:
        out = [h]
        k = self.nxt[self.twin[h]]
        while k != h:
            out.append(k)
            k = self.nxt[self.twin[k]]
        return out

    def same_face(self, h1: int, h2: int) -> bool:
        return h2 in self.face_walk(h1)

    def _new_pair(self, o1: int, o2: int) -> tuple[int, int]:
        x, y = len(self.origin), len(self.origin) + 1
        self.origin += [o1, o2]
        self.twin += [y, x]
        self.nxt += [x, y]
        return x, y

    def _insert_before(self, new: int, k: int) -> None:
        p = self.prev(k)
        self.nxt[p] = new
        self.nxt[new] = k

    def label_of(self, h: int) -> tuple[str, int] | None:
        return self.along.get(h) or self.along.get(self.twin[h])

    # -- moves
    def add_edge(self, k1: int, k2: int) -> int:
        """New edge from ``origin[k1]`` to ``origin[k2]`` splitting their common face.

        The new half-edge ``x`` is inserted just before ``k1`` and its twin just
        before ``k2``; ``x`` is returned. For ``k1 == k2`` the result is a loop
        bounding a monogon on the left of ``x``.
        """
        if not self.same_face(k1, k2):
            raise ValueError("corners are not on a common face")
        x, y = self._new_pair(self.origin[k1], self.origin[k2])
        self._insert_before(x, k1)
        self._insert_before(y, k2)
        return x

    def add_spike(self, k: int) -> int:
        """Hang a new vertex into the face right of ``k``; returns its outgoing half-edge."""
        w = self.n_vertices
        self.n_vertices += 1
        x, y = self._new_pair(self.origin[k], w)
        self._insert_before(x, k)
        return y

    def subdivide(self, h: int) -> int:
        """Split the edge of ``h``; returns the half-edge from the new vertex toward ``h``'s head."""
        t = self.twin[h]
        w = self.n_vertices
        self.n_vertices += 1
        a, b = self._new_pair(w, w)
        # a: w -> head(h), b: w -> origin(h)
        self.twin[h], self.twin[b] = b, h
        self.twin[t], self.twin[a] = a, t
        self.nxt[a], self.nxt[b] = b, a
        lab = self.along.pop(h, None) or self.along.pop(t, None)
        if lab is not None:
            c, along = lab
            if along == h:
                self.along[h], self.along[a] = (c, h), (c, a)
            else:
                self.along[t], self.along[b] = (c, t), (c, b)
        return a

    def set_label(self, h: int, curve: str) -> None:
        self.along.pop(self.twin[h], None)
        self.along[h] = (curve, h)

    def outgoing(self, v: int) -> list[int]:
        start = self.origin.index(v)
        out, h = [start], self.nxt[start]
        while h != start:
            out.append(h)
            h = self.nxt[h]
        return out

    def corner(self, v: int, h: int) -> int:
        """An outgoing half-edge at ``v`` lying on the face of ``h``."""
        walk = set(self.face_walk(h))
        for k in self.outgoing(v):
            if k in walk:
                return k
        raise ValueError(f"vertex {v} is not on the face of half-edge {h}")

    # -- output
    def build(self, chi: int) -> CurveDiagram:
        D0 = CurveDiagram(self.n_vertices, tuple(self.origin), tuple(self.twin), tuple(self.nxt), {}, {}, {}, chi)
        labels = {}
        for h, (c, a) in self.along.items():
            labels[min(h, self.twin[h])] = (c, a)
        markers = {c: None if self.marked[c] is None else Marker("face", D0.face_of[self.marked[c]])
                   for c in CURVES}
        return CurveDiagram(self.n_vertices, tuple(self.origin), tuple(self.twin), tuple(self.nxt),
                            labels, dict(self.kinds), markers, chi)


def polygon_surface(genus: int) -> tuple[MapBuilder, list[int]]:
    """One-vertex map from the word a1 b1 A1 B1 ... ; returns the polygon half-edges in order."""
    if genus < 1:
        raise ValueError("genus must be at least 1")
    B = MapBuilder()
    n = 4 * genus
    B.origin = [0] * n
    B.twin = [0] * n
    B.nxt = [0] * n
    B.n_vertices = 1
    # side 4i+0 pairs with 4i+2 and 4i+1 with 4i+3
    for i in range(genus):
        for s, t in ((0, 2), (1, 3)):
            B.twin[4 * i + s], B.twin[4 * i + t] = 4 * i + t, 4 * i + s
    for i in range(n):
        B.nxt[B.twin[i]] = (i + 1) % n
    return B, list(range(n))


def circle_in_face(B: MapBuilder, k: int, curve: str) -> tuple[int, int]:
    """Contractible circle hung into the face right of ``k``, disk on the left.

    Returns ``(x, y)``: the loop half-edge along the curve and its twin, whose
    face is the disk.
    """
    s = B.add_spike(k)
    x = B.add_edge(s, s)
    B.set_label(x, curve)
    return x, B.twin[x]


def _base(genus: int):
    B, ks = polygon_surface(genus)
    return B, ks, 2 - 2 * genus


def separating_loop(genus: int = 2, curve: str = "c1") -> tuple[MapBuilder, int]:
    """Loop cutting off the first handle, oriented with that one-holed torus on its left."""
    if genus < 2:
        raise ValueError("a separating essential loop needs genus >= 2")
    B, ks, chi = _base(genus)
    x = B.add_edge(ks[4], ks[0])
    B.set_label(x, curve)
    # the face walk through twin(x) holds the first handle
    if 0 not in B.face_walk(B.twin[x]):
        B.set_label(B.twin[x], curve)
    B.kinds[curve] = LOOP
    return B, chi


def template(name: str, genus: int = 2) -> tuple[MapBuilder, int]:
    """Builder for a named template on the genus-``genus`` surface, with its chi."""
    B, ks, chi = _base(genus)
    if name == "distinct_points":
        s = B.add_spike(ks[0])
        a = B.add_edge(s, s)
        B.marked["c1"], B.marked["c2"] = a, B.twin[a]
    elif name == "same_point":
        B.marked["c1"] = B.marked["c2"] = ks[0]
    elif name == "point_pushoff":
        _, y = circle_in_face(B, ks[0], "c1")
        B.marked["c2"] = y
    elif name == "nested_circles":
        _, y = circle_in_face(B, ks[0], "c1")
        circle_in_face(B, y, "c2")
    elif name == "disjoint_circles":
        circle_in_face(B, ks[0], "c1")
        circle_in_face(B, ks[2], "c2")
    elif name == "lens":
        x, y = circle_in_face(B, ks[0], "c1")
        u = B.origin[x]
        B.subdivide(x)
        p = B.n_vertices - 1
        inner = [h for h in B.outgoing(u) if B.same_face(h, y)][0]
        inner_p = [h for h in B.outgoing(p) if B.same_face(h, y)][0]
        c = B.add_edge(inner, inner_p)
        outer = [h for h in B.outgoing(u) if B.same_face(h, B.twin[y]) and not B.same_face(h, y)][0]
        outer_p = [h for h in B.outgoing(p) if B.same_face(h, outer)][0]
        d = B.add_edge(outer_p, outer)
        B.set_label(c, "c2")
        B.set_label(d, "c2")
    elif name == "figure_eight":
        x, y = circle_in_face(B, ks[0], "c1")
        u = B.origin[x]
        inner = [h for h in B.outgoing(u) if B.same_face(h, y)][0]
        z = B.add_edge(inner, inner)
        B.set_label(z, "c1")
        B.marked["c2"] = ks[2]
    elif name == "separating_with_circle":
        B, chi = separating_loop(genus)
        side = [h for h in range(len(B.origin)) if B.label_of(h) and B.label_of(h)[1] == h][0]
        circle_in_face(B, B.twin[side], "c2")
    elif name == "separating_with_point":
        B, chi = separating_loop(genus)
        side = [h for h in range(len(B.origin)) if B.label_of(h) and B.label_of(h)[1] == h][0]
        B.marked["c2"] = B.twin[side]
    elif name == "nonseparating":
        B.set_label(ks[0], "c1")
        B.kinds["c1"] = LOOP
        B.marked["c2"] = ks[1]
    else:
        raise KeyError(f"unknown fixture {name!r}")
    return B, chi


def fixture(name: str, genus: int = 2) -> CurveDiagram:
    B, chi = template(name, genus)
    return B.build(chi)


def random_moves(B: MapBuilder, n: int, rng: random.Random) -> None:
    """Apply ``n`` random subdivisions, in-face chords and spikes."""
    for _ in range(n):
        move = rng.random()
        h = rng.randrange(len(B.origin))
        if move < 0.5:
            B.subdivide(h)
        elif move < 0.8:
            B.add_edge(h, rng.choice(B.face_walk(h)))
        else:
            B.add_spike(h)


def random_diagram(rng: random.Random, genus: int = 2, n_moves: int = 12,
                   templates=None) -> tuple[str, CurveDiagram]:
    name = rng.choice(list(templates or TEMPLATES))
    B, chi = template(name, genus)
    random_moves(B, n_moves, rng)
    return name, B.build(chi)


TEMPLATES = ("distinct_points", "same_point", "point_pushoff", "nested_circles", "disjoint_circles",
             "lens", "figure_eight", "separating_with_circle", "separating_with_point")
