"""Poincare series of a length spectrum: growth fit, tail completion, value at 0.

Every function accepts either a ``LengthSpectrum`` or a sorted array of
lengths. For arrays the truncation length defaults to the largest entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arc_census import LengthSpectrum, StepFunction, counting_function


class InsufficientData(ValueError):
    pass


class PoleProximity(ValueError):
    pass


class UnstableExtrapolation(RuntimeError):
    pass


MIN_JUMPS = 30


@dataclass
class GrowthFit:
    h: float
    A: float
    residual: float  # max |log N - (log A + h T)| over the fitted jumps

    @property
    def flagged(self) -> bool:
        """True when the fit does not look like exponential growth at rate near 1."""
        return not 0.8 <= self.h <= 1.2 or self.residual > 1.0


@dataclass
class SeriesEstimate:
    value: float
    uncertainty: float
    method: str
    t_max_used: float


def _lengths(S, t_max: float | None = None) -> tuple[np.ndarray, float]:
    if isinstance(S, LengthSpectrum):
        L = S.lengths()
        tm = S.t_max if t_max is None else t_max
    else:
        L = np.sort(np.asarray(S, dtype=float))
        tm = (float(L[-1]) if len(L) else 0.0) if t_max is None else t_max
    return L, float(tm)


def counting_from_lengths(lengths) -> StepFunction:
    L = np.sort(np.asarray(lengths, dtype=float))
    if not len(L):
        return StepFunction(np.empty(0), np.empty(0, dtype=int))
    # one jump per distinct length (merge tolerance as in the census)
    brk = np.flatnonzero(np.diff(L) > 1e-7)
    last = np.concatenate((brk, [len(L) - 1]))
    return StepFunction(L[last], last + 1)


def partial_series(S, s) -> complex:
    L, _ = _lengths(S)
    return complex(np.sum(np.exp(-complex(s) * L))) if len(L) else 0j


def fit_growth(N, window: tuple[float, float]) -> GrowthFit:
    """Least-squares fit of ``log N(T) = log A + h T`` over the jumps in ``window``."""
    if isinstance(N, LengthSpectrum):
        N = counting_function(N)
    elif not isinstance(N, StepFunction):
        N = counting_from_lengths(N)
    T1, T2 = window
    mask = (N.jumps >= T1) & (N.jumps <= T2)
    if np.count_nonzero(mask) < MIN_JUMPS:
        raise InsufficientData(f"{np.count_nonzero(mask)} jumps in window, need {MIN_JUMPS}")
    t = N.jumps[mask]
    y = np.log(N.counts[mask].astype(float))
    h, logA = np.polyfit(t, y, 1)
    resid = float(np.max(np.abs(y - (logA + h * t))))
    return GrowthFit(float(h), float(math.exp(logA)), resid)


def tail_completed_series(S, s: float, A: float, h: float, t_max: float | None = None) -> float:
    """Partial sum plus the Laplace tail of ``A e^{hT}`` beyond the cutoff."""
    if abs(s - h) < 0.05:
        raise PoleProximity(f"s={s} within 0.05 of the growth rate {h}")
    L, tm = _lengths(S, t_max)
    part = float(np.sum(np.exp(-s * L)))
    return part + A * h * math.exp((h - s) * tm) / (s - h)


def _partial_on_grid(L: np.ndarray, grid: np.ndarray) -> np.ndarray:
    return np.array([np.exp(-s * L).sum() for s in grid])


def _F_values(L: np.ndarray, tm: float, A: float, h: float, grid: np.ndarray) -> np.ndarray:
    # (s - h) * completed series, entire across s = h for the model tail
    part = _partial_on_grid(L, grid)
    return (grid - h) * part + A * h * np.exp((h - grid) * tm)


def _extrapolate(L, tm, A, h, lo, hi, n, deg) -> float:
    grid = np.linspace(h + lo, h + hi, n)
    F = _F_values(L, tm, A, h, grid)
    # centred and scaled abscissa for a well-conditioned fit
    c, w = 0.5 * (grid[0] + grid[-1]), 0.5 * (grid[-1] - grid[0])
    coef = np.polynomial.polynomial.polyfit((grid - c) / w, F, deg)
    F0 = np.polynomial.polynomial.polyval((0.0 - c) / w, coef)
    return float(-F0 / h)


def continue_at_zero(S, A: float, h: float, t_max: float | None = None) -> SeriesEstimate:
    """Estimate the analytically continued series at ``s = 0``.

    ``F(s) = (s - h) * completed(s)`` is sampled on ``[h + 0.1, h + 1.0]``,
    fitted by a degree-4 polynomial and evaluated at 0. The uncertainty adds
    the spread over degrees 3..5 to the spread over perturbed grids.
    """
    L, tm = _lengths(S, t_max)
    if A == 0:
        # finite sum: entire, nothing to continue
        return SeriesEstimate(float(len(L)), 0.0, "finite-sum", tm)
    if not 0.8 <= h <= 1.2:
        raise ValueError(f"growth rate {h} outside [0.8, 1.2]")
    by_degree = [_extrapolate(L, tm, A, h, 0.1, 1.0, 20, d) for d in (3, 4, 5)]
    value = by_degree[1]
    deg_spread = max(by_degree) - min(by_degree)
    if deg_spread > 1.0:
        raise UnstableExtrapolation(f"degree spread {deg_spread:.3g} > 1")
    perturbed = [_extrapolate(L, tm, A, h, lo, hi, n, 4)
                 for lo, hi, n in ((0.1, 0.9, 20), (0.15, 1.0, 20), (0.1, 1.0, 15), (0.1, 1.0, 30))]
    grid_spread = max(perturbed + [value]) - min(perturbed + [value])
    return SeriesEstimate(value, deg_spread + grid_spread, "poly4-real-axis", tm)


def diagnostics_table(S, A: float, h: float, n: int = 20, t_max: float | None = None) -> list[tuple[float, float, float, float]]:
    """Rows ``(s, partial, completed, F)`` over the extrapolation grid."""
    L, tm = _lengths(S, t_max)
    grid = np.linspace(h + 0.1, h + 1.0, n)
    part = _partial_on_grid(L, grid)
    comp = part + A * h * np.exp((h - grid) * tm) / (grid - h)
    return [(float(s), float(p), float(c), float((s - h) * c)) for s, p, c in zip(grid, part, comp)]


def synthetic_zeta_lengths(A: float, n: int) -> np.ndarray:
    """Lengths ``log(k / A)``, k = 1..n; the series is ``A^s`` times a zeta partial sum."""
    if not 0 < A < 1:
        raise ValueError("A must lie in (0, 1) so that every length is positive")
    return np.log(np.arange(1, n + 1, dtype=float) / A)
