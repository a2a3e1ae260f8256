"""Initial surfaces used by run configurations and tests."""

from __future__ import annotations

import numpy as np

from .grid import SphereGrid
from .surface import GraphSurface


def sphere(grid: SphereGrid, r: float, offset=None, center=None) -> GraphSurface:
    """Sphere of radius r centred at ``center + offset``, graphed about ``center``.

    ``offset`` may be a scalar (shift along the polar axis) or a vector.
    """
    dim = grid.n + 1
    q = np.zeros(dim)
    if offset is not None:
        off = np.asarray(offset, dtype=float)
        if off.ndim == 0:
            q[-1] = float(off)
        else:
            q[:] = off
    if np.linalg.norm(q) >= r:
        raise ValueError("graph center must lie inside the sphere")
    x = grid.directions()
    xq = x @ q
    u = xq + np.sqrt(r * r - q @ q + xq * xq)
    return GraphSurface(grid, u, center)


def perturbed_sphere(grid: SphereGrid, r: float, modes, center=None) -> GraphSurface:
    """``u = r (1 + sum_k a_k cos(k theta))`` for ``modes = [(k, a_k), ...]``."""
    theta = grid.theta
    bump = np.zeros(grid.shape)
    for k, a in modes:
        bump = bump + a * np.cos(k * theta)
    return GraphSurface(grid, r * (1.0 + bump), center)


def ellipsoid(grid: SphereGrid, a: float, c: float, center=None) -> GraphSurface:
    """Ellipsoid of revolution graphed from its centre.

    ``a`` is the equatorial semi-axis, ``c`` the semi-axis along the polar axis.
    """
    x = grid.directions()
    z = x[..., -1]
    rho2 = 1.0 - z * z
    u = 1.0 / np.sqrt(rho2 / (a * a) + z * z / (c * c))
    return GraphSurface(grid, u, center)
