"""Finite-difference discretizations of the round sphere S^n.

Two modes share one interface:

``axisym``
    Rotationally symmetric fields on S^n (any n >= 2), sampled at N_theta
    cell-centred polar angles in (0, pi).  The axis regularity condition
    phi'(0) = phi'(pi) = 0 is imposed with even ghost nodes.
``full2d``
    Fields on S^2 on an N_theta x N_lambda latitude-longitude grid offset by
    half a cell from the poles.  The ghost row across a pole is the
    antipodal-in-longitude neighbour.

Derivatives are reported in the orthonormal frame (e_theta, e_lambda / sin
theta) of the round metric sigma.  In axisym mode the frame is e_theta
followed by n - 1 directions tangent to the orbits of the rotation group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gamma, pi

import numpy as np

from .errors import UnsupportedMode

MODES = ("axisym", "full2d")
MIN_NODES = 16


def sphere_area(n: int) -> float:
    """Area of the unit sphere S^n."""
    return 2.0 * pi ** ((n + 1) / 2) / gamma((n + 1) / 2)


def _cell_weights(edges: np.ndarray, power: int) -> np.ndarray:
    # Exact integral of sin^power over each cell; Gauss-Legendre is exact to
    # roundoff for this smooth integrand on cells this small.
    x, w = np.polynomial.legendre.leggauss(10)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (b - a) * x + 0.5 * (b + a)
    return np.sum(0.5 * (b - a) * w * np.sin(nodes) ** power, axis=1)


@dataclass(frozen=True, eq=False)
class SphereGrid:
    mode: str
    n: int
    n_theta: int
    n_lambda: int = 0
    theta: np.ndarray = field(repr=False, default=None)
    lam: np.ndarray = field(repr=False, default=None)
    weights: np.ndarray = field(repr=False, default=None)

    @property
    def shape(self) -> tuple:
        return (self.n_theta,) if self.mode == "axisym" else (self.n_theta, self.n_lambda)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def h_theta(self) -> float:
        return pi / self.n_theta

    @property
    def h_lambda(self) -> float:
        return 2 * pi / self.n_lambda if self.mode == "full2d" else 0.0

    @property
    def h_min(self) -> float:
        """Smallest geodesic node spacing (sets the explicit time step)."""
        if self.mode == "axisym":
            return self.h_theta
        return min(self.h_theta, np.sin(self.theta[0, 0]) * self.h_lambda)

    def same_layout(self, other: "SphereGrid") -> bool:
        return (self.mode, self.n, self.n_theta, self.n_lambda) == (
            other.mode, other.n, other.n_theta, other.n_lambda)

    # -- embedding helpers -------------------------------------------------

    def directions(self) -> np.ndarray:
        """Unit vectors in R^(n+1) of the nodes; the polar axis is the last coordinate."""
        th = self.theta
        out = np.zeros(self.shape + (self.n + 1,))
        if self.mode == "axisym":
            out[..., 0] = np.sin(th)
            out[..., -1] = np.cos(th)
        else:
            out[..., 0] = np.sin(th) * np.cos(self.lam)
            out[..., 1] = np.sin(th) * np.sin(self.lam)
            out[..., 2] = np.cos(th)
        return out

    def frame(self) -> np.ndarray:
        """Orthonormal tangent frame in R^(n+1), shape ``grid.shape + (n, n+1)``."""
        th = self.theta
        out = np.zeros(self.shape + (self.n, self.n + 1))
        if self.mode == "axisym":
            out[..., 0, 0] = np.cos(th)
            out[..., 0, -1] = -np.sin(th)
            for i in range(1, self.n):
                out[..., i, i] = 1.0
        else:
            lam = self.lam
            out[..., 0, 0] = np.cos(th) * np.cos(lam)
            out[..., 0, 1] = np.cos(th) * np.sin(lam)
            out[..., 0, 2] = -np.sin(th)
            out[..., 1, 0] = -np.sin(lam)
            out[..., 1, 1] = np.cos(lam)
        return out

    # -- raw stencils ------------------------------------------------------

    def _pad_theta(self, phi: np.ndarray, width: int) -> np.ndarray:
        if self.mode == "axisym":
            return np.concatenate([phi[:width][::-1], phi, phi[-width:][::-1]])
        half = self.n_lambda // 2
        top = np.roll(phi[:width][::-1], half, axis=1)
        bottom = np.roll(phi[-width:][::-1], half, axis=1)
        return np.concatenate([top, phi, bottom], axis=0)

    def _d_theta(self, phi):
        h = self.h_theta
        if self.mode == "axisym":
            e = self._pad_theta(phi, 1)
            return (e[2:] - e[:-2]) / (2 * h)
        # full2d: fourth-order first derivative; see module notes in the README.
        e = self._pad_theta(phi, 2)
        return (-e[4:] + 8 * e[3:-1] - 8 * e[1:-3] + e[:-4]) / (12 * h)

    def _d_theta2(self, phi):
        h = self.h_theta
        e = self._pad_theta(phi, 1)
        return (e[2:] - 2 * phi + e[:-2]) / (h * h)

    def _d_lambda(self, phi):
        # Scaled so the stencil is exact on cos(lambda), sin(lambda); mode-1
        # content is what the 1/sin(theta) factors amplify near the poles.
        dl = self.h_lambda
        raw = (np.roll(phi, -1, axis=-1) - np.roll(phi, 1, axis=-1)) / (2 * dl)
        return raw * (dl / np.sin(dl))

    def _d_lambda2(self, phi):
        dl = self.h_lambda
        raw = (np.roll(phi, -1, axis=-1) - 2 * phi + np.roll(phi, 1, axis=-1)) / (dl * dl)
        return raw * ((0.5 * dl) / np.sin(0.5 * dl)) ** 2

    def _d_theta_lambda(self, phi):
        h = self.h_theta
        e = self._d_lambda(self._pad_theta(phi, 2))
        return (-e[4:] + 8 * e[3:-1] - 8 * e[1:-3] + e[:-4]) / (12 * h)


def make_grid(mode: str, n: int, resolution) -> SphereGrid:
    """Build a grid.

    ``resolution`` is N_theta, or ``(N_theta, N_lambda)`` in full2d mode
    (N_lambda defaults to 2 N_theta and must be even).
    """
    if mode not in MODES:
        raise UnsupportedMode(f"unknown grid mode {mode!r}")
    if mode == "full2d" and n != 2:
        raise UnsupportedMode(f"full2d mode requires n = 2, got n = {n}")
    if n < 2:
        raise UnsupportedMode(f"n must be at least 2, got {n}")
    if isinstance(resolution, (tuple, list)):
        n_theta = int(resolution[0])
        n_lambda = int(resolution[1]) if len(resolution) > 1 else 2 * n_theta
    else:
        n_theta, n_lambda = int(resolution), 2 * int(resolution)
    if n_theta < MIN_NODES or (mode == "full2d" and n_lambda < MIN_NODES):
        raise ValueError(f"resolution must be at least {MIN_NODES} nodes per dimension")

    h = pi / n_theta
    theta_1d = (np.arange(n_theta) + 0.5) * h
    edges = np.arange(n_theta + 1) * h
    if mode == "axisym":
        w = sphere_area(n - 1) * _cell_weights(edges, n - 1)
        return SphereGrid(mode, n, n_theta, 0, theta_1d, None, w)

    if n_lambda % 2:
        raise ValueError("N_lambda must be even (pole closure uses the antipodal longitude)")
    dl = 2 * pi / n_lambda
    lam_1d = np.arange(n_lambda) * dl
    theta, lam = np.meshgrid(theta_1d, lam_1d, indexing="ij")
    w = np.repeat((_cell_weights(edges, 1) * dl)[:, None], n_lambda, axis=1)
    return SphereGrid(mode, n, n_theta, n_lambda, theta, lam, w)


def _as_field(grid: SphereGrid, phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    if phi.shape != grid.shape:
        raise ValueError(f"field shape {phi.shape} does not match grid {grid.shape}")
    return phi


def covariant_gradient(grid: SphereGrid, phi) -> np.ndarray:
    """Frame components of D phi, shape ``grid.shape + (n,)``."""
    phi = _as_field(grid, phi)
    out = np.zeros(grid.shape + (grid.n,))
    out[..., 0] = grid._d_theta(phi)
    if grid.mode == "full2d":
        out[..., 1] = grid._d_lambda(phi) / np.sin(grid.theta)
    return out


def covariant_hessian(grid: SphereGrid, phi) -> np.ndarray:
    """Frame components of phi_{;ij}, shape ``grid.shape + (n, n)``, symmetric."""
    phi = _as_field(grid, phi)
    n = grid.n
    out = np.zeros(grid.shape + (n, n))
    d1 = grid._d_theta(phi)
    cot = 1.0 / np.tan(grid.theta)
    out[..., 0, 0] = grid._d_theta2(phi)
    if grid.mode == "axisym":
        for i in range(1, n):
            out[..., i, i] = cot * d1
        return out
    s = np.sin(grid.theta)
    dl = grid._d_lambda(phi)
    mixed = (grid._d_theta_lambda(phi) - cot * dl) / s
    out[..., 0, 1] = mixed
    out[..., 1, 0] = mixed
    out[..., 1, 1] = grid._d_lambda2(phi) / (s * s) + cot * d1
    return out


def axisym_hessian_parts(grid: SphereGrid, phi):
    """The two distinct frame values (phi'', cot(theta) phi') in axisym mode."""
    phi = _as_field(grid, phi)
    return grid._d_theta2(phi), grid._d_theta(phi) / np.tan(grid.theta)


def gradient_norm_sq(grid: SphereGrid, phi) -> np.ndarray:
    """sigma^{ij} phi_i phi_j at every node."""
    g = covariant_gradient(grid, phi)
    return np.sum(g * g, axis=-1)


def laplacian(grid: SphereGrid, phi) -> np.ndarray:
    """Discrete Laplace-Beltrami operator, written directly from the stencils."""
    phi = _as_field(grid, phi)
    cot = 1.0 / np.tan(grid.theta)
    out = grid._d_theta2(phi) + (grid.n - 1) * cot * grid._d_theta(phi)
    if grid.mode == "full2d":
        out = out + grid._d_lambda2(phi) / np.sin(grid.theta) ** 2
    return out


def integrate(grid: SphereGrid, f) -> float:
    """Quadrature of f against the area measure of sigma.

    Summation runs in a fixed (C) order so results are reproducible.
    """
    f = _as_field(grid, f)
    return float(np.sum((grid.weights * f).ravel()))
