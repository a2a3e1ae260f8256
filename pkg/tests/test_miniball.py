import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize

from icflow.miniball import enclosing_ball


def _minimax_oracle(pts):
    """min s subject to |p - c|^2 <= s, a smooth convex program."""
    d = pts.shape[1]
    c0 = pts.mean(0)
    x0 = np.append(c0, np.max(np.sum((pts - c0) ** 2, axis=1)))
    cons = dict(type="ineq", fun=lambda x: x[-1] - np.sum((pts - x[:d]) ** 2, axis=1),
                jac=lambda x: np.hstack([2 * (pts - x[:d]), np.ones((len(pts), 1))]))
    res = minimize(lambda x: x[-1], x0, jac=lambda x: np.eye(d + 1)[-1], method="SLSQP",
                   constraints=[cons], options=dict(ftol=1e-15, maxiter=500))
    return np.sqrt(res.x[-1])


def test_two_points():
    c, r = enclosing_ball(np.array([[0.0, 0.0], [2.0, 0.0]]))
    np.testing.assert_allclose(c, [1, 0], atol=1e-14)
    assert r == pytest.approx(1.0)


def test_equilateral_triangle():
    pts = np.array([[1.0, 0.0], [-0.5, np.sqrt(3) / 2], [-0.5, -np.sqrt(3) / 2]])
    c, r = enclosing_ball(pts)
    np.testing.assert_allclose(c, 0, atol=1e-12)
    assert r == pytest.approx(1.0, rel=1e-12)


def test_obtuse_triangle_uses_long_side():
    pts = np.array([[0.0, 0.0], [4.0, 0.0], [2.0, 0.5]])
    c, r = enclosing_ball(pts)
    np.testing.assert_allclose(c, [2, 0], atol=1e-12)
    assert r == pytest.approx(2.0)


def test_sphere_points():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(500, 3))
    x /= np.linalg.norm(x, axis=1)[:, None]
    c, r = enclosing_ball(2.0 * x + [1.0, -1.0, 0.5])
    np.testing.assert_allclose(c, [1, -1, 0.5], atol=1e-3)
    assert r == pytest.approx(2.0, abs=1e-3)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(2, 3), st.integers(2, 60))
def test_against_minimax_oracle(seed, dim, m):
    pts = np.random.default_rng(seed).normal(size=(m, dim))
    c, r = enclosing_ball(pts)
    assert np.all(np.linalg.norm(pts - c, axis=1) <= r * (1 + 1e-10))
    assert r == pytest.approx(_minimax_oracle(pts), rel=1e-6)


def test_deterministic():
    pts = np.random.default_rng(9).normal(size=(200, 3))
    a, b = enclosing_ball(pts), enclosing_ball(pts)
    assert np.array_equal(a[0], b[0]) and a[1] == b[1]
