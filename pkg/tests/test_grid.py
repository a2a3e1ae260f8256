from math import pi

import numpy as np
import pytest
import sympy as sp

from icflow import grid as sg
from icflow.errors import UnsupportedMode

from oracles import sphere_hessian_of_restriction


def test_area_s2():
    g = sg.make_grid("axisym", 2, 64)
    assert np.sum(g.weights) == pytest.approx(4 * pi, rel=1e-8)


def test_area_s3():
    g = sg.make_grid("axisym", 3, 64)
    assert np.sum(g.weights) == pytest.approx(2 * pi ** 2, rel=1e-8)


@pytest.mark.parametrize("mode,n,exact", [("axisym", 4, 8 * pi ** 2 / 3), ("full2d", 2, 4 * pi)])
def test_area_other(mode, n, exact):
    g = sg.make_grid(mode, n, 32)
    assert sg.integrate(g, np.ones(g.shape)) == pytest.approx(exact, rel=1e-8)


def test_full2d_requires_n2():
    with pytest.raises(UnsupportedMode):
        sg.make_grid("full2d", 3, 32)
    with pytest.raises(UnsupportedMode):
        sg.make_grid("cubed", 2, 32)


def test_resolution_floor():
    with pytest.raises(ValueError):
        sg.make_grid("axisym", 2, 8)
    with pytest.raises(ValueError):
        sg.make_grid("full2d", 2, (32, 33))


def test_node_layout():
    g = sg.make_grid("full2d", 2, (16, 24))
    assert g.shape == (16, 24)
    assert np.all((g.theta > 0) & (g.theta < pi))
    np.testing.assert_allclose(np.diff(g.lam[0]), 2 * pi / 24)
    a = sg.make_grid("axisym", 2, 20)
    assert a.theta[0] == pytest.approx(pi / 40)


def test_grid_is_deterministic():
    a, b = sg.make_grid("full2d", 2, 24), sg.make_grid("full2d", 2, 24)
    assert np.array_equal(a.weights, b.weights) and np.array_equal(a.theta, b.theta)


@pytest.mark.parametrize("mode", ["axisym", "full2d"])
def test_constants_have_zero_derivatives(mode):
    g = sg.make_grid(mode, 2, 32)
    c = np.full(g.shape, 3.7)
    assert np.max(np.abs(sg.covariant_hessian(g, c))) <= 1e-12
    assert np.max(np.abs(sg.gradient_norm_sq(g, c))) <= 1e-24


def test_symbolic_hessian_of_cos_theta():
    """Hess cos(theta) = -cos(theta) sigma on the round S^2."""
    th, lam = sp.symbols("theta lambda")
    coords = (th, lam)
    metric = sp.diag(1, sp.sin(th) ** 2)
    inv = metric.inv()
    f = sp.cos(th)

    def christoffel(k, i, j):
        return sum(inv[k, l] * (sp.diff(metric[l, i], coords[j]) + sp.diff(metric[l, j], coords[i])
                                - sp.diff(metric[i, j], coords[l])) for l in range(2)) / 2

    for i in range(2):
        for j in range(2):
            hij = sp.diff(f, coords[i], coords[j]) - sum(christoffel(k, i, j) * sp.diff(f, coords[k]) for k in range(2))
            assert sp.simplify(hij + f * metric[i, j]) == 0


def _hessian_error(mode, N, f, grad_f, hess_f):
    g = sg.make_grid(mode, 2, N)
    values = f(g.directions())
    exact = sphere_hessian_of_restriction(g, f, grad_f, hess_f)
    return np.max(np.abs(sg.covariant_hessian(g, values) - exact))


def _linear_z():
    a = np.array([0.0, 0.0, 1.0])
    return (lambda x: x @ a, lambda x: np.broadcast_to(a, x.shape), lambda x: np.zeros(x.shape + (3,)))


def _exponential():
    a = np.array([0.7, 0.2, 0.4])
    f = lambda x: np.exp(x @ a)
    return (f, lambda x: f(x)[..., None] * a, lambda x: f(x)[..., None, None] * np.outer(a, a))


def test_full2d_hessian_of_cos_theta():
    g = sg.make_grid("full2d", 2, 32)
    hess = sg.covariant_hessian(g, np.cos(g.theta))
    expected = -np.cos(g.theta)[..., None, None] * np.eye(2)
    errs = [np.max(np.abs(hess - expected))]
    g2 = sg.make_grid("full2d", 2, 64)
    errs.append(np.max(np.abs(sg.covariant_hessian(g2, np.cos(g2.theta)) + np.cos(g2.theta)[..., None, None] * np.eye(2))))
    assert errs[0] < 5e-3
    assert 3.5 <= errs[0] / errs[1] <= 4.5


def test_axisym_hessian_of_cos_theta():
    g = sg.make_grid("axisym", 2, 64)
    d2, rot = sg.axisym_hessian_parts(g, np.cos(g.theta))
    np.testing.assert_allclose(d2, -np.cos(g.theta), atol=1e-3)
    np.testing.assert_allclose(rot, -np.cos(g.theta), atol=1e-3)
    hess = sg.covariant_hessian(g, np.cos(g.theta))
    assert hess.shape == (64, 2, 2)
    assert np.all(hess[:, 0, 1] == 0)


@pytest.mark.parametrize("field", [_linear_z, _exponential])
def test_full2d_hessian_second_order_including_poles(field):
    e1 = _hessian_error("full2d", 32, *field())
    e2 = _hessian_error("full2d", 64, *field())
    assert 3.5 <= e1 / e2 <= 4.5


def test_full2d_hessian_off_axis_linear_function():
    # x = sin(theta) cos(lambda) is an l = 1 harmonic: Hess x = -x sigma
    a = np.array([1.0, 0.0, 0.0])
    errs = [_hessian_error("full2d", N, lambda x: x @ a, lambda x: np.broadcast_to(a, x.shape),
                           lambda x: np.zeros(x.shape + (3,))) for N in (32, 64)]
    assert errs[0] < 1e-2
    assert errs[1] < errs[0] / 3.5


def test_hessian_symmetric(rng):
    g = sg.make_grid("full2d", 2, 24)
    hess = sg.covariant_hessian(g, rng.normal(size=g.shape))
    assert np.array_equal(hess, np.swapaxes(hess, -1, -2))


def test_gradient_norm_of_cos_theta():
    errs = []
    for N in (64, 128):
        g = sg.make_grid("axisym", 2, N)
        q = sg.gradient_norm_sq(g, np.cos(g.theta))
        assert np.all(q >= 0)
        errs.append(np.max(np.abs(q - np.sin(g.theta) ** 2)))
    assert errs[0] < 1e-3
    assert 3.5 <= errs[0] / errs[1] <= 4.5


def test_gradient_norm_full2d_off_axis():
    errs = []
    for N in (32, 64):
        g = sg.make_grid("full2d", 2, N)
        x = g.directions()[..., 0]
        errs.append(np.max(np.abs(sg.gradient_norm_sq(g, x) - (1 - x * x))))
    # at least second order; the fourth-order theta derivative often does better
    assert errs[0] / errs[1] >= 3.5


def test_integrals():
    g = sg.make_grid("axisym", 2, 64)
    assert sg.integrate(g, np.ones(g.shape)) == pytest.approx(4 * pi, rel=1e-8)
    assert abs(sg.integrate(g, np.cos(g.theta))) <= 1e-8
    errs = []
    for N in (64, 128):
        gg = sg.make_grid("axisym", 2, N)
        errs.append(abs(sg.integrate(gg, np.cos(gg.theta) ** 2) - 4 * pi / 3))
    assert errs[0] / (4 * pi / 3) < 1e-3
    assert 3.5 <= errs[0] / errs[1] <= 4.5


def test_integrate_full2d_odd_field_vanishes():
    g = sg.make_grid("full2d", 2, 32)
    x = g.directions()
    for i in range(3):
        assert abs(sg.integrate(g, x[..., i])) <= 1e-12


def test_integrate_reproducible(rng):
    g = sg.make_grid("full2d", 2, 32)
    f = rng.normal(size=g.shape)
    assert sg.integrate(g, f) == sg.integrate(g, f.copy())


@pytest.mark.parametrize("mode,n", [("axisym", 2), ("axisym", 3), ("full2d", 2)])
def test_hessian_trace_is_laplacian(mode, n, rng):
    g = sg.make_grid(mode, n, 32)
    f = np.cos(g.theta) ** 3 + 0.1 * rng.normal(size=g.shape)
    tr = np.trace(sg.covariant_hessian(g, f), axis1=-2, axis2=-1)
    np.testing.assert_allclose(tr, sg.laplacian(g, f), rtol=1e-12, atol=1e-9)


def test_laplacian_of_first_harmonic_converges():
    errs = []
    for N in (32, 64):
        g = sg.make_grid("full2d", 2, N)
        y = g.directions()[..., 1]
        errs.append(np.max(np.abs(sg.laplacian(g, y) + 2 * y)))
    assert errs[1] < errs[0] / 3.5


@pytest.mark.parametrize("mode", ["axisym", "full2d"])
def test_operators_are_linear(mode, rng):
    g = sg.make_grid(mode, 2, 24)
    f, h = rng.normal(size=g.shape), rng.normal(size=g.shape)
    a, b = 1.7, -0.3
    for op in (sg.covariant_hessian, sg.covariant_gradient, sg.laplacian):
        np.testing.assert_allclose(op(g, a * f + b * h), a * op(g, f) + b * op(g, h), atol=1e-8)
    assert sg.integrate(g, a * f + b * h) == pytest.approx(a * sg.integrate(g, f) + b * sg.integrate(g, h))
