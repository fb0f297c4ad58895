"""Upper half-plane primitives: points, isometries, geodesics, perpendiculars.

Points are ``HPoint(x, y)`` with ``y > 0``. Ideal endpoints are floats, with
``math.inf`` standing for the point at infinity (there is no ``-inf``: the
real projective line has a single infinite point).

Tangent vectors are stored as complex numbers in model coordinates. A unit
tangent at ``z`` has Euclidean length ``Im z``. Orientation is the standard
one of the half-plane (``dx ^ dy`` positive); flipping it flips every side
predicate at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INF = math.inf

GEOM_TOL = 1e-9
NORM_TOL = 1e-12


class NotHyperbolic(ValueError):
    pass


class IdenticalLines(ValueError):
    pass


class DegenerateTangent(ValueError):
    pass


@dataclass(frozen=True)
class HPoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"point must lie in the upper half-plane, got y={self.y}")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "HPoint":
        return cls(z.real, z.imag)


def _canonical_sign(a, b, c, d, tol=1e-9):
    for v in (a, b, c, d):
        if abs(v) > tol:
            if v < 0:
                return -a, -b, -c, -d
            return a, b, c, d
    raise ValueError("zero matrix is not an isometry")


@dataclass(frozen=True)
class Isometry:
    """Element of PSL(2, R), stored with determinant 1 and canonical sign."""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def make(cls, a, b, c, d) -> "Isometry":
        det = a * d - b * c
        if det <= 0:
            raise ValueError(f"determinant must be positive, got {det}")
        s = math.sqrt(det)
        return cls(*_canonical_sign(a / s, b / s, c / s, d / s))

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(1.0, 0.0, 0.0, 1.0)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return Isometry.make(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "Isometry":
        return Isometry(*_canonical_sign(self.d, -self.b, -self.c, self.a))

    @property
    def trace(self) -> float:
        return self.a + self.d

    def entries(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def is_hyperbolic(self) -> bool:
        return abs(self.trace) > 2.0 + NORM_TOL

    def close_to(self, other: "Isometry", tol: float = 1e-8) -> bool:
        e1, e2 = self.entries(), other.entries()
        return (max(abs(u - v) for u, v in zip(e1, e2)) <= tol
                or max(abs(u + v) for u, v in zip(e1, e2)) <= tol)


def mobius_apply(g: Isometry, z: HPoint) -> HPoint:
    w = z.z
    return HPoint.from_complex((g.a * w + g.b) / (g.c * w + g.d))


def mobius_ideal(g: Isometry, p: float) -> float:
    """Action on the boundary ``R u {inf}``."""
    if p == INF:
        return INF if g.c == 0 else g.a / g.c
    den = g.c * p + g.d
    if den == 0:
        return INF
    return (g.a * p + g.b) / den


def mobius_tangent(g: Isometry, z: HPoint, v: complex) -> complex:
    """Push a tangent vector at ``z`` forward by ``g``."""
    return v / (g.c * z.z + g.d) ** 2


def dist(p: HPoint, q: HPoint) -> float:
    dx = p.x - q.x
    dy = p.y - q.y
    # 2 asinh(|p-q| / (2 sqrt(y_p y_q))) is accurate for nearby points too
    return 2.0 * math.asinh(math.hypot(dx, dy) / (2.0 * math.sqrt(p.y * q.y)))


@dataclass(frozen=True)
class GeodesicLine:
    """Oriented complete geodesic running from ``p_minus`` to ``p_plus``."""

    p_minus: float
    p_plus: float

    def __post_init__(self):
        if self.p_minus == self.p_plus:
            raise ValueError("geodesic endpoints must differ")
        if self.p_minus == -INF or self.p_plus == -INF:
            raise ValueError("use +inf for the point at infinity")

    def reversed(self) -> "GeodesicLine":
        return GeodesicLine(self.p_plus, self.p_minus)

    def image(self, g: Isometry) -> "GeodesicLine":
        return GeodesicLine(mobius_ideal(g, self.p_minus), mobius_ideal(g, self.p_plus))

    def same_set(self, other: "GeodesicLine", tol: float = GEOM_TOL) -> bool:
        return (_ideal_close(self.p_minus, other.p_minus, tol) and _ideal_close(self.p_plus, other.p_plus, tol)) or (
            _ideal_close(self.p_minus, other.p_plus, tol) and _ideal_close(self.p_plus, other.p_minus, tol))


def _ideal_close(p: float, q: float, tol: float) -> bool:
    if p == INF or q == INF:
        return p == q or (p == INF and abs(q) > 1 / tol) or (q == INF and abs(p) > 1 / tol)
    return abs(p - q) <= tol * max(1.0, abs(p), abs(q))


@dataclass(frozen=True)
class PerpSegment:
    length: float
    foot1: HPoint
    foot2: HPoint
    dir1: complex  # at foot1, pointing toward foot2
    dir2: complex  # at foot2, velocity on arrival (pointing away from foot1)


def line_to_axis(L: GeodesicLine) -> Isometry:
    """Isometry sending ``L`` to the imaginary axis, oriented upward."""
    p, q = L.p_minus, L.p_plus
    if q == INF:
        return Isometry(1.0, -p, 0.0, 1.0)
    if p == INF:
        return Isometry.make(0.0, -1.0, 1.0, -q)
    # z -> (z - p)/(z - q), composed with z -> -z when that map flips the half-plane
    if p > q:
        return Isometry.make(1.0, -p, 1.0, -q)
    return Isometry.make(-1.0, p, 1.0, -q)


def axis(g: Isometry) -> GeodesicLine:
    """Translation axis of a hyperbolic element, oriented in its translation direction."""
    if not g.is_hyperbolic():
        raise NotHyperbolic(f"|trace| = {abs(g.trace):.6g} <= 2")
    a, b, c, d = g.entries()
    if c == 0:
        # fixed points a*z + b = d*z ... with one of them at infinity
        fin = b / (d - a)
        return GeodesicLine(fin, INF) if abs(a) > abs(d) else GeodesicLine(INF, fin)
    tr = a + d
    disc = math.sqrt(tr * tr - 4.0)
    r1 = (a - d + disc) / (2.0 * c)
    r2 = (a - d - disc) / (2.0 * c)
    # attracting fixed point has |g'(z)| = 1/(cz+d)^2 < 1
    if abs(c * r1 + d) > abs(c * r2 + d):
        return GeodesicLine(r2, r1)
    return GeodesicLine(r1, r2)


def translation_length(g: Isometry) -> float:
    if not g.is_hyperbolic():
        raise NotHyperbolic(f"|trace| = {abs(g.trace):.6g} <= 2")
    return 2.0 * math.acosh(abs(g.trace) / 2.0)


def line_tangent(L: GeodesicLine, z: HPoint) -> complex:
    """Unit tangent of ``L`` at a point ``z`` on it, pointing toward ``p_plus``."""
    M = line_to_axis(L)
    w = mobius_apply(M, z)
    return mobius_tangent(M.inverse(), w, complex(0.0, w.y))


def point_to_line(p: HPoint, L: GeodesicLine) -> tuple[float, HPoint, complex | None]:
    """Distance, orthogonal foot, and unit tangent at the foot pointing at ``p``.

    The direction is ``None`` when ``p`` lies on ``L``.
    """
    M = line_to_axis(L)
    w = mobius_apply(M, p)
    rho = math.hypot(w.x, w.y)
    length = math.asinh(abs(w.x) / w.y)
    Minv = M.inverse()
    foot_w = HPoint(0.0, rho)
    foot = mobius_apply(Minv, foot_w)
    if length <= GEOM_TOL:
        return 0.0, foot, None
    v = complex(math.copysign(rho, w.x), 0.0)
    return length, foot, mobius_tangent(Minv, foot_w, v)


def common_perpendicular(L1: GeodesicLine, L2: GeodesicLine) -> PerpSegment | None:
    """Common perpendicular from ``L1`` to ``L2``; ``None`` unless their closures are disjoint."""
    if L1.same_set(L2):
        raise IdenticalLines("lines have equal endpoint sets")
    M = line_to_axis(L1)
    u, v = mobius_ideal(M, L2.p_minus), mobius_ideal(M, L2.p_plus)
    if u == INF or v == INF or u * v <= 0:
        return None
    lo, hi = sorted((abs(u), abs(v)))
    sgn = 1.0 if u > 0 else -1.0
    if hi - lo <= GEOM_TOL * hi:
        raise IdenticalLines("lines have equal endpoint sets")
    rho = math.sqrt(lo * hi)
    length = math.log((math.sqrt(hi) + math.sqrt(lo)) / (math.sqrt(hi) - math.sqrt(lo)))
    x2 = sgn * 2.0 * lo * hi / (lo + hi)
    y2 = rho * (hi - lo) / (hi + lo)
    f1w, f2w = HPoint(0.0, rho), HPoint(x2, y2)
    # tangents to |z| = rho, hyperbolic unit length
    d1w = complex(sgn * rho, 0.0)
    d2w = -sgn * y2 * 1j * complex(x2, y2) / rho
    Minv = M.inverse()
    return PerpSegment(
        length=length,
        foot1=mobius_apply(Minv, f1w),
        foot2=mobius_apply(Minv, f2w),
        dir1=mobius_tangent(Minv, f1w, d1w),
        dir2=mobius_tangent(Minv, f2w, d2w),
    )


def side_sign(L: GeodesicLine, z: HPoint, v: complex) -> int:
    """+1 iff ``(v, tangent of L at z)`` is a positively oriented frame."""
    if abs(v) < 1e-12:
        raise DegenerateTangent("tangent vector is zero")
    t = line_tangent(L, z)
    det = v.real * t.imag - v.imag * t.real
    return 1 if det > 0 else -1
