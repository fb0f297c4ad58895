"""Closed-surface groups acting on the upper half-plane and their orbit balls.

Generators are named by single lowercase letters; in words an uppercase
letter is the inverse (``"abAB"`` is the commutator ``[a, b]``).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .hyp_plane import (
    GeodesicLine,
    HPoint,
    IdenticalLines,
    Isometry,
    PerpSegment,
    axis,
    common_perpendicular,
    dist,
    line_to_axis,
    mobius_apply,
    point_to_line,
    side_sign,
    translation_length,
)

DEFAULT_CAP = 10**7
KEY_GRID = 1e-6


class RadiusTooLarge(RuntimeError):
    pass


class NotInGroup(ValueError):
    pass


class GroupFormatError(ValueError):
    pass


@dataclass
class SurfaceGroup:
    generators: dict[str, Isometry]
    relator: str
    genus: int
    basepoint: HPoint = field(default_factory=lambda: HPoint(0.0, 1.0))
    # radius of a Dirichlet domain centred at the basepoint; bounds pruning
    covering_radius: float | None = None

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus

    def letters(self) -> list[str]:
        """Generator letters followed by their inverses."""
        names = list(self.generators)
        return names + [n.upper() for n in names]

    def letter_matrix(self, letter: str) -> Isometry:
        if letter in self.generators:
            return self.generators[letter]
        low = letter.lower()
        if low in self.generators and letter != low:
            return self.generators[low].inverse()
        raise NotInGroup(f"unknown generator letter {letter!r}")

    def evaluate(self, word: str) -> Isometry:
        g = Isometry.identity()
        for ch in word:
            g = g @ self.letter_matrix(ch)
        return g

    def max_generator_displacement(self) -> float:
        o = self.basepoint
        return max(dist(o, mobius_apply(g, o)) for g in self.generators.values())

    def pruning_margin(self) -> float:
        if self.covering_radius is not None:
            return self.covering_radius
        return 2.0 * self.max_generator_displacement()

    def validate(self) -> list[str]:
        problems = []
        for name in self.generators:
            if len(name) != 1 or not name.islower():
                problems.append(f"generator name {name!r} is not a single lowercase letter")
        if problems:
            return problems
        if self.genus < 2:
            problems.append("genus must be >= 2")
        try:
            r = self.evaluate(self.relator)
            if not r.close_to(Isometry.identity(), 1e-8):
                problems.append("relator does not evaluate to +-identity")
        except NotInGroup as exc:
            problems.append(str(exc))
        for name, g in self.generators.items():
            if not g.is_hyperbolic():
                problems.append(f"generator {name} is not hyperbolic")
        return problems


def invert_word(word: str) -> str:
    return word[::-1].swapcase()


# ---------------------------------------------------------------- constructors

def _disk_to_halfplane(m: np.ndarray) -> Isometry:
    # Cayley map w -> i(1 + w)/(1 - w) sends the disk centre to i
    C = np.array([[1j, 1j], [-1.0, 1.0]])
    Ci = np.linalg.inv(C)
    h = C @ m @ Ci
    h = h / np.sqrt(np.linalg.det(h))
    # result is real up to a global unit scalar
    k = h.flat[np.argmax(np.abs(h))]
    h = h * (abs(k) / k)
    return Isometry.make(*(float(v.real) for v in h.flat))


def standard_group(genus: int) -> SurfaceGroup:
    """Side pairings of the regular 4g-gon with all angles 2*pi/(4g).

    Sides are labelled a1 b1 a1^-1 b1^-1 ... counterclockwise; the centre of
    the polygon sits at ``i``.
    """
    if genus < 2:
        raise ValueError("genus must be >= 2")
    n = 4 * genus
    inradius = math.acosh(1.0 / math.tan(math.pi / n))
    ell = 2.0 * inradius
    circumradius = math.acosh(1.0 / math.tan(math.pi / n) ** 2)
    theta = [2.0 * math.pi * k / n for k in range(n)]

    def rot(t):
        return np.array([[np.exp(0.5j * t), 0], [0, np.exp(-0.5j * t)]])

    T = np.array([[math.cosh(ell / 2), math.sinh(ell / 2)], [math.sinh(ell / 2), math.cosh(ell / 2)]], dtype=complex)

    def pairing(i, j):
        # carries side j onto side i, the polygon onto its neighbour across side i
        return rot(theta[i]) @ T @ rot(math.pi - theta[j])

    names = "abcdefghijklmnopqrstuvwxyz"
    if 2 * genus > len(names):
        raise ValueError("genus too large for single-letter generator names")
    gens: dict[str, Isometry] = {}
    relator = []
    for k in range(genus):
        x, y = names[2 * k], names[2 * k + 1]
        gens[x] = _disk_to_halfplane(pairing(4 * k, 4 * k + 2))
        gens[y] = _disk_to_halfplane(pairing(4 * k + 3, 4 * k + 1))
        relator.append(x + y + x.upper() + y.upper())
    return SurfaceGroup(gens, "".join(relator), genus, HPoint(0.0, 1.0), circumradius)


def standard_genus2_group() -> SurfaceGroup:
    return standard_group(2)


# ---------------------------------------------------------------- file format

def format_group(G: SurfaceGroup) -> str:
    lines = [f"# closed surface group, genus {G.genus}", f"genus {G.genus}"]
    for name, g in G.generators.items():
        lines.append("gen {} {} {} {} {}".format(name, *(repr(float(v)) for v in g.entries())))
    lines.append(f"relator {G.relator}")
    lines.append(f"basepoint {G.basepoint.x!r} {G.basepoint.y!r}")
    if G.covering_radius is not None:
        lines.append(f"covering_radius {G.covering_radius!r}")
    return "\n".join(lines) + "\n"


def parse_group(text: str) -> SurfaceGroup:
    gens: dict[str, Isometry] = {}
    relator = None
    genus = None
    basepoint = HPoint(0.0, 1.0)
    covering = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "gen" and len(tok) == 6:
                a, b, c, d = map(float, tok[2:])
                gens[tok[1]] = Isometry.make(a, b, c, d)
            elif tok[0] == "relator" and len(tok) >= 2:
                relator = "".join(tok[1:])
            elif tok[0] == "genus" and len(tok) == 2:
                genus = int(tok[1])
            elif tok[0] == "basepoint" and len(tok) == 3:
                basepoint = HPoint(float(tok[1]), float(tok[2]))
            elif tok[0] == "covering_radius" and len(tok) == 2:
                covering = float(tok[1])
            else:
                raise GroupFormatError(f"line {lineno}: unrecognised record {line!r}")
        except ValueError as exc:
            if isinstance(exc, GroupFormatError):
                raise
            raise GroupFormatError(f"line {lineno}: {exc}") from exc
    if relator is None or genus is None or not gens:
        raise GroupFormatError("group file needs gen, relator and genus records")
    G = SurfaceGroup(gens, relator, genus, basepoint, covering)
    problems = G.validate()
    if problems:
        raise GroupFormatError("; ".join(problems))
    return G


def read_group(path) -> SurfaceGroup:
    return parse_group(Path(path).read_text())


def write_group(G: SurfaceGroup, path) -> None:
    Path(path).write_text(format_group(G))


# ---------------------------------------------------------------- ball enumeration

@dataclass
class GroupBall:
    radius: float
    elements: list[Isometry]
    words: list[str]
    displacements: np.ndarray

    def __len__(self):
        return len(self.elements)


def _conj_to_i(p: HPoint) -> np.ndarray:
    s = math.sqrt(p.y)
    return np.array([[s, p.x / s], [0.0, 1.0 / s]])


def _sign_normalize(M: np.ndarray) -> np.ndarray:
    flat = M.reshape(len(M), 4)
    big = np.abs(flat) > 1e-9
    first = np.argmax(big, axis=1)
    sgn = np.sign(flat[np.arange(len(flat)), first])
    return M * sgn[:, None, None]


class _KeySet:
    """Float-matrix dedup on a 1e-6 grid, robust to values near cell edges."""

    def __init__(self):
        self._seen: set[bytes] = set()

    def _keys(self, M: np.ndarray):
        scaled = _sign_normalize(M).reshape(len(M), 4) / KEY_GRID
        r = np.rint(scaled)
        frac = scaled - r
        return r.astype(np.int64), frac

    def add_new(self, M: np.ndarray) -> np.ndarray:
        """Insert rows of ``M``; returns a mask of rows not seen before."""
        keys, frac = self._keys(M)
        fresh = np.zeros(len(M), dtype=bool)
        shaky = np.abs(frac) > 0.3
        for i in range(len(M)):
            k = keys[i].tobytes()
            if k in self._seen:
                continue
            if shaky[i].any() and self._near_seen(keys[i], frac[i]):
                continue
            self._seen.add(k)
            fresh[i] = True
        return fresh

    def _near_seen(self, key, frac) -> bool:
        alts = [key]
        for j in range(4):
            if abs(frac[j]) > 0.3:
                step = 1 if frac[j] > 0 else -1
                alts = alts + [np.where(np.arange(4) == j, a + step, a) for a in alts]
        return any(a.tobytes() in self._seen for a in alts[1:])


def _cosh_disp(M: np.ndarray) -> np.ndarray:
    return 0.5 * np.einsum("nij,nij->n", M, M)


def enumerate_ball(G: SurfaceGroup, R: float, cap: int = DEFAULT_CAP, workers: int = 1,
                   margin: float | None = None) -> GroupBall:
    """All group elements moving the basepoint by at most ``R``.

    Breadth-first growth of reduced words. A word is expanded only while
    its displacement is at most ``R + margin``; with ``margin`` at least the
    covering radius of a Dirichlet domain every element of the ball is
    reached, since the tiles met by a geodesic segment from the basepoint
    form a chain of side-adjacent tiles whose centres stay within the
    covering radius of the segment.
    """
    if R < 0:
        raise ValueError("radius must be nonnegative")
    if margin is None:
        margin = G.pruning_margin()
    explore = R + margin
    projected = (math.cosh(explore) - 1.0) / abs(G.euler_characteristic)
    if projected > cap:
        raise RadiusTooLarge(f"projected {projected:.3g} elements exceeds cap {cap}")

    P = _conj_to_i(G.basepoint)
    Pi = np.linalg.inv(P)
    letters = G.letters()
    L = np.array([Pi @ np.array(G.letter_matrix(ch).entries()).reshape(2, 2) @ P for ch in letters])
    inverse_of = {ch: ch.swapcase() for ch in letters}
    cosh_explore = math.cosh(explore)

    seen = _KeySet()
    frontier_M = np.eye(2)[None, :, :]
    frontier_w = [""]
    seen.add_new(frontier_M)
    out_M = [frontier_M]
    out_w = [""]

    def expand(chunk):
        Ms, ws = chunk
        cand_M, cand_w = [], []
        for li, ch in enumerate(letters):
            ok = np.array([not w or w[-1] != inverse_of[ch] for w in ws], dtype=bool)
            if not ok.any():
                continue
            prod = Ms[ok] @ L[li]
            keep = _cosh_disp(prod) <= cosh_explore
            if keep.any():
                idx = np.flatnonzero(ok)[keep]
                cand_M.append((idx, li, prod[keep]))
        # restore (parent, letter) order so word witnesses come out shortlex
        if not cand_M:
            return np.empty((0, 2, 2)), []
        order_keys, mats = [], []
        for idx, li, prod in cand_M:
            order_keys.append(idx * len(letters) + li)
            mats.append(prod)
        order_keys = np.concatenate(order_keys)
        mats = np.concatenate(mats)
        perm = np.argsort(order_keys, kind="stable")
        words = [ws[k // len(letters)] + letters[k % len(letters)] for k in order_keys[perm]]
        return mats[perm], words

    total = 1
    while len(frontier_w):
        size = max(1, len(frontier_w) // max(1, workers))
        chunks = [(frontier_M[i:i + size], frontier_w[i:i + size]) for i in range(0, len(frontier_w), size)]
        if workers > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(expand, chunks))
        else:
            results = [expand(c) for c in chunks]
        mats = [m for m, _ in results if len(m)]
        if not mats:
            break
        cand_M = np.concatenate(mats)
        cand_w = [w for _, ws in results for w in ws]
        fresh = seen.add_new(cand_M)
        frontier_M = cand_M[fresh]
        frontier_w = [w for w, f in zip(cand_w, fresh) if f]
        total += len(frontier_w)
        if total > cap:
            raise RadiusTooLarge(f"explored more than {cap} elements")
        out_M.append(frontier_M)
        out_w.extend(frontier_w)

    allM = np.concatenate(out_M)
    ch = np.maximum(_cosh_disp(allM), 1.0)
    disp = np.arccosh(ch)
    inside = disp <= R + 1e-12
    allM, disp = allM[inside], disp[inside]
    words = [w for w, k in zip(out_w, inside) if k]
    order = sorted(range(len(words)), key=lambda i: (round(float(disp[i]), 9), len(words[i]), words[i]))
    real = P @ allM[order] @ Pi
    elements = [Isometry.make(*map(float, m.flat)) for m in real]
    return GroupBall(R, elements, [words[i] for i in order], disp[order])


def all_reduced_words(G: SurfaceGroup, max_len: int) -> list[str]:
    """Every freely reduced word of length at most ``max_len`` (no pruning)."""
    letters = G.letters()
    out = [""]
    layer = [""]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for ch in letters:
                if w and w[-1] == ch.swapcase():
                    continue
                nxt.append(w + ch)
        out.extend(nxt)
        layer = nxt
    return out


def find_word(G: SurfaceGroup, g: Isometry, tol: float = 1e-6) -> str:
    """Shortest word found for ``g`` in the ball of its own displacement."""
    o = G.basepoint
    r = dist(o, mobius_apply(g, o))
    ball = enumerate_ball(G, r + 1e-6)
    for h, w in zip(ball.elements, ball.words):
        if h.close_to(g, tol):
            return w
    raise NotInGroup("element not found in the group ball of its displacement")


# ---------------------------------------------------------------- double cosets

@dataclass
class PerpClass:
    """One double coset <g1> h <g2> with its common perpendicular."""

    rep: Isometry
    word: str
    perp: PerpSegment
    line: GeodesicLine  # h . axis(g2), oriented
    start_sign: int
    end_sign: int


def _axis_position(A: GeodesicLine, ref: HPoint, p: HPoint) -> float:
    """Signed arclength along ``A`` from the projection of ``ref`` to ``p`` (on A)."""
    M = line_to_axis(A)
    _, foot, _ = point_to_line(ref, A)
    return math.log(mobius_apply(M, p).y / mobius_apply(M, foot).y)


def cluster(values: list[tuple], tol: float) -> list[list[int]]:
    """Group indices of float tuples that agree within ``tol``.

    Coordinates are split one at a time by a 1-d sweep, so near-ties in an
    earlier coordinate cannot interleave groups of a later one.
    """
    groups = [list(range(len(values)))] if values else []
    dim = len(values[0]) if values else 0
    for c in range(dim):
        split = []
        for g in groups:
            g = sorted(g, key=lambda i: values[i][c])
            cur = [g[0]]
            for i in g[1:]:
                if values[i][c] - values[cur[-1]][c] <= tol:
                    cur.append(i)
                else:
                    split.append(cur)
                    cur = [i]
            split.append(cur)
        groups = split
    return groups


def double_coset_classes(G: SurfaceGroup, g1: Isometry, g2: Isometry, R: float,
                         word1: str | None = None, word2: str | None = None,
                         workers: int = 1, cap: int = DEFAULT_CAP) -> tuple[list[PerpClass], int]:
    """Double cosets <g1> h <g2> whose axes admit a perpendicular of length <= R.

    Returns the classes sorted by length and the number of ball elements
    skipped because ``h . axis(g2)`` coincides with ``axis(g1)``.
    """
    for g, w in ((g1, word1), (g2, word2)):
        if w is not None:
            if not G.evaluate(w).close_to(g, 1e-6):
                raise NotInGroup(f"word {w!r} does not evaluate to the given element")
        else:
            find_word(G, g)
    if R <= 0:
        return [], 0
    A1, A2 = axis(g1), axis(g2)
    l1, l2 = translation_length(g1), translation_length(g2)
    o = G.basepoint
    r1 = point_to_line(o, A1)[0]
    r2 = point_to_line(o, A2)[0]
    ball = enumerate_ball(G, R + r1 + r2 + 0.5 * (l1 + l2) + 1e-9, cap=cap, workers=workers)

    shared = 0
    cands = []
    for h, w in zip(ball.elements, ball.words):
        line = A2.image(h)
        if line.same_set(A1, 1e-8):
            shared += 1
            continue
        try:
            perp = common_perpendicular(A1, line)
        except IdenticalLines:
            shared += 1
            continue
        if perp is None or perp.length > R:
            continue
        s = _axis_position(A1, o, perp.foot1) % l1
        cands.append((h, w, perp, line, s))

    # tolerant grouping by (signs, length, position mod l1); position is cyclic
    keyed = []
    for h, w, perp, line, s in cands:
        ss = side_sign(A1, perp.foot1, perp.dir1)
        es = side_sign(line, perp.foot2, perp.dir2)
        if s > l1 - 1e-6:
            s -= l1
        keyed.append((float(ss), float(es), perp.length, s))
    classes = []
    for grp in cluster(keyed, 1e-6):
        best = min(grp, key=lambda i: (len(cands[i][1]), cands[i][1]))
        h, w, perp, line, _ = cands[best]
        classes.append(PerpClass(h, w, perp, line, int(keyed[best][0]), int(keyed[best][1])))
    classes.sort(key=lambda c: (c.perp.length, len(c.word), c.word))
    return classes, shared


def double_coset_reps(G: SurfaceGroup, g1: Isometry, g2: Isometry, R: float,
                      word1: str | None = None, word2: str | None = None) -> list[Isometry]:
    return [c.rep for c in double_coset_classes(G, g1, g2, R, word1, word2)[0]]
