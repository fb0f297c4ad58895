"""Scalar Riccati solutions and tangent maps of the geodesic flow on surfaces."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


class BlowUp(RuntimeError):
    pass


class LengthMismatch(ValueError):
    pass


@dataclass
class RiccatiSolution:
    grid: np.ndarray
    values: np.ndarray
    kind: str  # "unstable" or "stable"

    def residual(self, K: Callable[[float], float]) -> float:
        """Max of |L' + L^2 + K| using central differences on the interior grid."""
        t, L = self.grid, self.values
        dL = (L[2:] - L[:-2]) / (t[2:] - t[:-2])
        Kv = np.array([K(x) for x in t[1:-1]])
        return float(np.max(np.abs(dL + L[1:-1] ** 2 + Kv)))

    def __call__(self, t):
        return np.interp(t, self.grid, self.values)


def _rk4(f, t0: float, y0: float, dt: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    ts = t0 + dt * np.arange(n + 1)
    ys = np.empty(n + 1)
    y = y0
    ys[0] = y
    for i in range(n):
        t = ts[i]
        k1 = f(t, y)
        k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1)
        k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2)
        k4 = f(t + dt, y + dt * k3)
        y = y + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        if not math.isfinite(y) or abs(y) > 1e8:
            raise BlowUp(f"Riccati integration escaped at t={t:.6g}")
        ys[i + 1] = y
    return ts, ys


def _curvature_bound(K, t0: float, t1: float) -> float:
    samples = np.linspace(t0, t1, 2001)
    top = max(K(float(t)) for t in samples)
    if top >= 0:
        raise BlowUp("curvature must be uniformly negative")
    return -top


def riccati_unstable(K: Callable[[float], float], t_span: tuple[float, float], dt: float = 1e-3,
                     kappa0: float | None = None) -> RiccatiSolution:
    """Unstable solution of ``L' + L^2 + K(t) = 0`` on ``t_span``.

    Forward integration from ``t_span[0] - 20/sqrt(kappa0)`` started at
    ``sqrt(kappa0)``; the burn-in is discarded. Nearby solutions are
    attracted at rate ``exp(-2 sqrt(kappa0) t)``, so what remains does not
    depend on the starting value.
    """
    t0, t1 = t_span
    if kappa0 is None:
        kappa0 = _curvature_bound(K, t0 - 20.0, t1)
    burn = 20.0 / math.sqrt(kappa0)
    n_burn = int(math.ceil(burn / dt))
    n_main = int(round((t1 - t0) / dt))
    start = t0 - n_burn * dt
    ts, ys = _rk4(lambda t, L: -L * L - K(t), start, math.sqrt(kappa0), dt, n_burn + n_main)
    return RiccatiSolution(ts[n_burn:], ys[n_burn:], "unstable")


def riccati_stable(K: Callable[[float], float], t_span: tuple[float, float], dt: float = 1e-3,
                   kappa0: float | None = None) -> RiccatiSolution:
    """Stable solution, obtained by integrating backward from beyond ``t_span[1]``."""
    t0, t1 = t_span
    rev = riccati_unstable(lambda t: K(-t), (-t1, -t0), dt, kappa0)
    return RiccatiSolution(-rev.grid[::-1], -rev.values[::-1], "stable")


def jacobi_propagator_const(t: float) -> np.ndarray:
    """Tangent map of the geodesic flow for curvature -1 in the (e1, e3) frame."""
    return np.array([[math.cosh(t), math.sinh(t)], [math.sinh(t), math.cosh(t)]])


def tangent_map(Lu0: float, Ls0: float, Lu_t: float, Ls_t: float, int_u: float, int_s: float) -> np.ndarray:
    """Tangent map in the (e1, e3) frame from Riccati data along an orbit.

    ``Lu0, Ls0`` are the Riccati values at time 0, ``Lu_t, Ls_t`` at time t,
    and ``int_u, int_s`` the integrals of the unstable/stable solutions over
    ``[0, t]``.
    """
    eu, es = math.exp(int_u), math.exp(int_s)
    return np.array([
        [Lu0 * es - Ls0 * eu, eu - es],
        [Lu0 * Ls_t * es - Ls0 * Lu_t * eu, Lu_t * eu - Ls_t * es],
    ]) / (Lu0 - Ls0)


def tangent_map_along(K: Callable[[float], float], t: float, dt: float = 1e-3) -> np.ndarray:
    """Tangent map over ``[0, t]`` for a curvature profile along one orbit."""
    lo, hi = min(0.0, t), max(0.0, t)
    Lu = riccati_unstable(K, (lo, hi), dt)
    Ls = riccati_stable(K, (lo, hi), dt)

    def integral(sol):
        g, v = sol.grid, sol.values
        j0, j1 = np.argmin(np.abs(g)), np.argmin(np.abs(g - t))
        a, b = sorted((j0, j1))
        val = float(np.trapezoid(v[a:b + 1], g[a:b + 1]))
        return val if j1 >= j0 else -val

    return tangent_map(float(Lu(0.0)), float(Ls(0.0)), float(Lu(t)), float(Ls(t)), integral(Lu), integral(Ls))


def conormal_transversality(kappa, Lu) -> tuple[bool, float]:
    """Check that the curve's geodesic curvature never meets the unstable slope.

    Returns ``(ok, margin)`` with ``margin = min |kappa - Lu|``.
    """
    kappa = np.asarray(kappa, dtype=float)
    Lu = np.asarray(Lu, dtype=float)
    if kappa.shape != Lu.shape:
        raise LengthMismatch(f"{kappa.shape} vs {Lu.shape}")
    margin = float(np.min(np.abs(kappa - Lu)))
    if margin < 1e-12:
        margin = 0.0
    return margin > 0.0, margin
