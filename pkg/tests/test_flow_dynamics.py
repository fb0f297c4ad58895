import math

import numpy as np
import pytest

from oracles import riccati_scipy
from orthogeo.flow_dynamics import (
    BlowUp,
    LengthMismatch,
    conormal_transversality,
    jacobi_propagator_const,
    riccati_stable,
    riccati_unstable,
    tangent_map,
    tangent_map_along,
)


def test_constant_curvature_fixed_points():
    assert np.max(np.abs(riccati_unstable(lambda t: -1.0, (0, 5)).values - 1.0)) < 1e-8
    assert np.max(np.abs(riccati_unstable(lambda t: -4.0, (0, 5)).values - 2.0)) < 1e-8
    assert np.max(np.abs(riccati_stable(lambda t: -1.0, (0, 5)).values + 1.0)) < 1e-8


def test_periodic_curvature_against_high_order_oracle():
    K = lambda t: -1.0 - 0.5 * math.sin(t)
    sol = riccati_unstable(K, (0.0, 2 * math.pi))
    assert 0.9 < float(np.mean(sol.values)) < 1.3
    assert sol.residual(K) < 1e-6
    assert np.all(sol.values > 0)
    # oracle: adaptive 8th-order integration over a long burn-in
    ref = riccati_scipy(K, -40.0, 2 * math.pi, 1.0, sol.grid)
    assert np.max(np.abs(ref - sol.values)) < 1e-7


def test_stable_unstable_duality():
    K = lambda t: -1.0 - 0.3 * math.cos(2 * t) - 0.2 * math.sin(t)
    s = riccati_stable(K, (0.0, 3.0))
    u = riccati_unstable(lambda t: K(-t), (-3.0, 0.0))
    assert np.max(np.abs(s.values + u.values[::-1])) < 1e-7


def test_blowup_on_nonnegative_curvature():
    with pytest.raises(BlowUp):
        riccati_unstable(lambda t: 0.5, (0, 1))


def test_jacobi_propagator():
    assert np.array_equal(jacobi_propagator_const(0.0), np.eye(2))
    J = jacobi_propagator_const(1.0)
    assert np.allclose(J, [[1.5431, 1.1752], [1.1752, 1.5431]], atol=1e-4)
    for s, t in ((0.3, 1.1), (-0.7, 2.0)):
        assert np.max(np.abs(jacobi_propagator_const(s) @ jacobi_propagator_const(t)
                             - jacobi_propagator_const(s + t))) < 1e-10


def test_general_tangent_map_reduces_to_constant_case():
    for t in (0.5, 1.0, -1.3):
        M = tangent_map(1.0, -1.0, 1.0, -1.0, t, -t)
        assert np.max(np.abs(M - jacobi_propagator_const(t))) < 1e-12


def test_tangent_map_along_curvature_profiles():
    M = tangent_map_along(lambda t: -1.0, 1.0)
    assert np.max(np.abs(M - jacobi_propagator_const(1.0))) < 1e-8
    K = lambda t: -1.0 - 0.5 * math.sin(t)
    Mp, Mm = tangent_map_along(K, 1.0), tangent_map_along(K, -1.0)
    assert Mp[0, 1] > 0 and Mp[1, 0] > 0
    assert Mm[0, 1] < 0 and Mm[1, 0] < 0
    assert abs(np.linalg.det(Mp) - 1.0) < 1e-6


def test_tangent_map_solves_jacobi_equation():
    # first row (J, J') of a Jacobi field J'' + K J = 0 with J(0) = 1, J'(0) = 0
    from scipy.integrate import solve_ivp

    K = lambda t: -1.0 - 0.5 * math.sin(t)
    M = tangent_map_along(K, 1.5)
    sol = solve_ivp(lambda t, y: [y[1], -K(t) * y[0]], (0, 1.5), [1.0, 0.0], rtol=1e-11, atol=1e-12)
    assert M[0, 0] == pytest.approx(sol.y[0, -1], abs=1e-6)
    assert M[1, 0] == pytest.approx(sol.y[1, -1], abs=1e-6)


def test_conormal_transversality():
    assert conormal_transversality(np.zeros(10), np.ones(10)) == (True, 1.0)
    assert conormal_transversality(np.ones(10), np.ones(10)) == (False, 0.0)
    t = np.linspace(0, 2 * math.pi, 401)
    ok, margin = conormal_transversality(np.sin(t), np.ones_like(t))
    assert not ok and margin == 0.0
    with pytest.raises(LengthMismatch):
        conormal_transversality(np.zeros(3), np.zeros(4))
