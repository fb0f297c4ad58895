"""Curve diagrams: two curves drawn on a rotation-system CW decomposition of a surface.

Half-edges carry ``origin``, ``twin`` and ``nxt``, where ``nxt[h]`` is the
next outgoing half-edge counterclockwise around ``origin[h]``. Faces are the
orbits of ``h -> nxt[twin[h]]``; the face of ``h`` lies to its right, so the
face to the left of ``h`` is the face of ``twin[h]``. Face ids are assigned
in increasing order of the smallest half-edge on each face.

An edge is keyed by its smaller half-edge id. A labeled edge records the
half-edge that runs along the curve.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

CURVES = ("c1", "c2")
LABELS = ("none",) + CURVES
POINT, LOOP = "point", "loop"


class DiagramFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Marker:
    """Location of a point representative: interior of a face, or a vertex."""

    where: str  # "face" or "vertex"
    index: int

    def __str__(self):
        return str(self.index) if self.where == "face" else f"v{self.index}"


@dataclass(frozen=True, eq=False)
class CurveDiagram:
    n_vertices: int
    origin: tuple[int, ...]
    twin: tuple[int, ...]
    nxt: tuple[int, ...]
    labels: dict[int, tuple[str, int]]  # edge key -> (curve, along half-edge)
    kinds: dict[str, str]
    markers: dict[str, Marker | None] = field(default_factory=dict)
    chi: int = 0

    @property
    def n_half_edges(self) -> int:
        return len(self.origin)

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        n = self.n_half_edges
        face = [-1] * n
        k = 0
        for h0 in range(n):
            if face[h0] >= 0:
                continue
            h = h0
            while face[h] < 0:
                face[h] = k
                h = self.nxt[self.twin[h]]
            k += 1
        return tuple(face)

    @property
    def n_faces(self) -> int:
        return max(self.face_of) + 1 if self.n_half_edges else 0

    def edge_keys(self) -> list[int]:
        return [h for h in range(self.n_half_edges) if h < self.twin[h]]

    def edge_key(self, h: int) -> int:
        return min(h, self.twin[h])

    def label_of(self, h: int) -> str:
        return self.labels.get(self.edge_key(h), ("none", -1))[0]

    def crossing_increment(self, h: int, curve: str) -> int:
        """Jump of the curve's function from the face right of ``h`` to the face left of it."""
        lab = self.labels.get(self.edge_key(h))
        if lab is None or lab[0] != curve:
            return 0
        return 1 if lab[1] == h else -1

    def rotation(self, v: int) -> list[int]:
        """Outgoing half-edges at ``v`` in counterclockwise order."""
        start = self.origin.index(v)
        out = [start]
        h = self.nxt[start]
        while h != start:
            out.append(h)
            h = self.nxt[h]
        return out

    def curve_edges(self, curve: str) -> list[int]:
        """Half-edges running along ``curve``."""
        return sorted(a for lab, a in self.labels.values() if lab == curve)

    def euler_characteristic(self) -> int:
        return self.n_vertices - len(self.edge_keys()) + self.n_faces

    def swapped(self) -> "CurveDiagram":
        sw = {"c1": "c2", "c2": "c1"}
        return CurveDiagram(self.n_vertices, self.origin, self.twin, self.nxt,
                            {k: (sw[c], a) for k, (c, a) in self.labels.items()},
                            {sw[c]: k for c, k in self.kinds.items()},
                            {sw[c]: m for c, m in self.markers.items()}, self.chi)

    def reversed_curves(self, curves=CURVES) -> "CurveDiagram":
        labels = {k: (c, self.twin[a] if c in curves else a) for k, (c, a) in self.labels.items()}
        return CurveDiagram(self.n_vertices, self.origin, self.twin, self.nxt, labels,
                            dict(self.kinds), dict(self.markers), self.chi)


# ---------------------------------------------------------------- validation

def _structural_problems(D: CurveDiagram) -> list[str]:
    n = D.n_half_edges
    out = []
    if not (len(D.twin) == len(D.nxt) == n):
        return ["half-edge arrays have different lengths"]
    for h in range(n):
        t = D.twin[h]
        if not 0 <= t < n or t == h or D.twin[t] != h:
            out.append(f"twin of half-edge {h} is not an involution")
        if not 0 <= D.origin[h] < D.n_vertices:
            out.append(f"half-edge {h} has unknown origin {D.origin[h]}")
    if sorted(D.nxt) != list(range(n)):
        out.append("rotation successor is not a permutation")
        return out
    for h in range(n):
        if D.origin[D.nxt[h]] != D.origin[h]:
            out.append(f"rotation at half-edge {h} leaves its vertex")
    seen = set()
    for h0 in range(n):
        if h0 in seen:
            continue
        h = h0
        while h not in seen:
            seen.add(h)
            h = D.nxt[h]
    orbits = {}
    for h0 in range(n):
        h, orb = h0, []
        while True:
            orb.append(h)
            h = D.nxt[h]
            if h == h0:
                break
        orbits.setdefault(D.origin[h0], set()).add(min(orb))
    for v in range(D.n_vertices):
        k = len(orbits.get(v, ()))
        if k != 1:
            out.append(f"vertex {v} has {k} rotation cycles")
    return out


def validate_diagram(D: CurveDiagram) -> list[str]:
    """List of violated invariants; the diagram is valid iff the list is empty."""
    problems = _structural_problems(D)
    if problems:
        return problems
    chi = D.euler_characteristic()
    if chi != D.chi:
        problems.append(f"V - E + F = {chi} but declared CHI is {D.chi}")
    if D.chi >= 0:
        problems.append(f"surface Euler characteristic {D.chi} is not negative")
    for k, (c, a) in D.labels.items():
        if c not in CURVES:
            problems.append(f"edge {k} has unknown label {c!r}")
        if D.edge_key(a) != k:
            problems.append(f"edge {k}: along half-edge {a} is not on this edge")
    for c in CURVES:
        kind = D.kinds.get(c)
        has_edges = bool(D.curve_edges(c))
        m = D.markers.get(c)
        if kind not in (POINT, LOOP):
            problems.append(f"{c}: unknown kind {kind!r}")
        elif kind == LOOP and not has_edges:
            problems.append(f"{c}: loop class without labeled edges")
        elif kind == POINT and not has_edges and m is None:
            problems.append(f"{c}: point class without a marked face or vertex")
        if m is not None:
            if has_edges:
                problems.append(f"{c}: marked point given together with labeled edges")
            bound = D.n_faces if m.where == "face" else D.n_vertices
            if not 0 <= m.index < bound:
                problems.append(f"{c}: marked {m.where} {m.index} does not exist")
    for v in range(D.n_vertices):
        rot = D.rotation(v)
        seq = [(D.label_of(h), D.labels[D.edge_key(h)][1] == h) for h in rot if D.label_of(h) != "none"]
        count = {c: sum(1 for lab, _ in seq if lab == c) for c in CURVES}
        for c in CURVES:
            n_out = sum(1 for lab, o in seq if lab == c and o)
            if count[c] > 4:
                problems.append(f"vertex {v}: {c} multiplicity > 2")
            elif 2 * n_out != count[c]:
                problems.append(f"vertex {v}: {c} does not pass through (open curve)")
        if count["c1"] and count["c2"]:
            if count["c1"] == 4 or count["c2"] == 4:
                problems.append(f"vertex {v}: self-intersection on a crossing")
            elif [lab for lab, _ in seq] not in (["c1", "c2", "c1", "c2"], ["c2", "c1", "c2", "c1"]):
                problems.append(f"vertex {v}: non-alternating crossing")
        for c in CURVES:
            if count[c] == 4 and not (count["c1"] and count["c2"]):
                dirs = [o for lab, o in seq if lab == c]
                if dirs[0] == dirs[2] or dirs[1] == dirs[3]:
                    problems.append(f"vertex {v}: {c} double point is not transverse")
    return problems


# ---------------------------------------------------------------- text format

def format_diagram(D: CurveDiagram) -> str:
    lines = [f"VERTICES {D.n_vertices}", "HALFEDGES"]
    lines += [f"{h} {D.origin[h]} {D.twin[h]} {D.nxt[h]}" for h in range(D.n_half_edges)]
    lines.append("EDGES")
    for k in D.edge_keys():
        c, a = D.labels.get(k, ("none", -1))
        lines.append(f"{k} {c} {a if c != 'none' else '-'}")
    for c in CURVES:
        m = D.markers.get(c)
        lines.append(f"KIND {c} {D.kinds[c]}" + (f" {m}" if m is not None else ""))
    lines.append(f"CHI {D.chi}")
    return "\n".join(lines) + "\n"


def parse_diagram(text: str) -> CurveDiagram:
    n_vertices = None
    rows: dict[int, tuple[int, int, int]] = {}
    labels: dict[int, tuple[str, int]] = {}
    kinds: dict[str, str] = {}
    markers: dict[str, Marker | None] = {}
    chi = None
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0].upper()
        try:
            if head == "VERTICES":
                n_vertices, section = int(tok[1]), None
            elif head in ("HALFEDGES", "EDGES"):
                section = head
            elif head == "KIND":
                curve, kind = tok[1].lower(), tok[2].lower()
                if curve not in CURVES:
                    raise DiagramFormatError(f"line {lineno}: unknown curve {tok[1]!r}")
                kinds[curve] = kind
                markers[curve] = None
                if len(tok) > 3:
                    m = re.fullmatch(r"(v?)(\d+)", tok[3])
                    if not m:
                        raise DiagramFormatError(f"line {lineno}: bad marker {tok[3]!r}")
                    markers[curve] = Marker("vertex" if m.group(1) else "face", int(m.group(2)))
                section = None
            elif head == "CHI":
                chi, section = int(tok[1]), None
            elif section == "HALFEDGES":
                h, o, t, nx = (int(x) for x in tok[:4])
                if h in rows:
                    raise DiagramFormatError(f"line {lineno}: half-edge {h} listed twice")
                rows[h] = (o, t, nx)
            elif section == "EDGES":
                h, lab = int(tok[0]), tok[1].lower()
                if lab not in LABELS:
                    raise DiagramFormatError(f"line {lineno}: unknown label {tok[1]!r}")
                if lab != "none":
                    if tok[2] == "-":
                        raise DiagramFormatError(f"line {lineno}: labeled edge needs a direction")
                    labels[h] = (lab, int(tok[2]))
            else:
                raise DiagramFormatError(f"line {lineno}: unexpected {tok[0]!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, DiagramFormatError):
                raise
            raise DiagramFormatError(f"line {lineno}: {exc}") from None
    if n_vertices is None or chi is None:
        raise DiagramFormatError("missing VERTICES or CHI record")
    if sorted(rows) != list(range(len(rows))):
        raise DiagramFormatError("half-edge ids must be 0..n-1")
    for c in CURVES:
        if c not in kinds:
            raise DiagramFormatError(f"missing KIND record for {c}")
    n = len(rows)
    origin = tuple(rows[h][0] for h in range(n))
    twin = tuple(rows[h][1] for h in range(n))
    nxt = tuple(rows[h][2] for h in range(n))
    # re-key labels by the smaller half-edge of each edge
    keyed = {}
    for h, (lab, a) in labels.items():
        if not 0 <= h < n or not 0 <= twin[h] < n:
            raise DiagramFormatError(f"edge {h} does not exist")
        k = min(h, twin[h])
        if k in keyed:
            raise DiagramFormatError(f"edge {k} labeled twice")
        keyed[k] = (lab, a)
    return CurveDiagram(n_vertices, origin, twin, nxt, keyed, kinds, markers, chi)


def read_diagram(path) -> CurveDiagram:
    return parse_diagram(Path(path).read_text())


def write_diagram(D: CurveDiagram, path) -> None:
    Path(path).write_text(format_diagram(D))
