"""Extrinsic geometry of a radial graph over the sphere.

A surface is ``M = {center + u(x) x : x in S^n}``.  With ``phi = log u`` and
``g = D phi`` in the orthonormal frame of sigma, the induced metric is
``u^2 (I + g g^T)`` and the second fundamental form (inward normal) is
``(u / v) (I + g g^T - D^2 phi)``.  The shape operator is therefore similar
to the symmetric matrix

    S = (u v)^-1  P (I + g g^T - D^2 phi) P,   P = I - g g^T / (v (v + 1)),

with ``v^2 = 1 + |g|^2``; its eigenvalues are the principal curvatures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import grid as sg
from .curvature import CurvatureSpec, in_cone
from .errors import NumericalDegeneracy


@dataclass(frozen=True, eq=False)
class GraphSurface:
    grid: sg.SphereGrid
    u: np.ndarray
    center: np.ndarray = None

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        if u.shape != self.grid.shape:
            raise ValueError(f"u has shape {u.shape}, grid expects {self.grid.shape}")
        if not np.all(np.isfinite(u)) or np.any(u <= 0):
            bad = np.argwhere(~(np.isfinite(u) & (u > 0)))[0]
            raise NumericalDegeneracy(f"graph function not positive and finite at node {tuple(bad)}")
        c = np.zeros(self.grid.n + 1) if self.center is None else np.asarray(self.center, float)
        if c.shape != (self.grid.n + 1,):
            raise ValueError(f"center must have {self.grid.n + 1} components")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "center", c)

    def with_u(self, u) -> "GraphSurface":
        return GraphSurface(self.grid, u, self.center)

    def scaled(self, lam: float) -> "GraphSurface":
        return GraphSurface(self.grid, lam * self.u, self.center)

    def translated(self, shift) -> "GraphSurface":
        return GraphSurface(self.grid, self.u, self.center + np.asarray(shift, float))


@dataclass(frozen=True, eq=False)
class ExtrinsicData:
    points: np.ndarray       # grid.shape + (n+1,)
    normals: np.ndarray      # outward unit normals, grid.shape + (n+1,)
    v: np.ndarray
    grad_phi_sq: np.ndarray  # sigma^{ij} phi_i phi_j with phi = log u
    kappa: np.ndarray        # grid.shape + (n,), ascending
    H: np.ndarray
    A2: np.ndarray           # |A|^2
    w: np.ndarray            # |A|^2 - H^2 / n
    shape_operator: np.ndarray = None  # full2d only: symmetric S per node

    @property
    def kappa_min(self) -> float:
        return float(self.kappa[..., 0].min())

    @property
    def kappa_max(self) -> float:
        return float(self.kappa[..., -1].max())


def embed(surface: GraphSurface):
    """Node positions and outward unit normals in R^(n+1)."""
    ext = extrinsic(surface)
    return ext.points, ext.normals


def _normals(grid, g, v):
    x = grid.directions()
    tangential = np.einsum("...i,...ia->...a", g, grid.frame())
    return (x - tangential) / v[..., None]


def extrinsic(surface: GraphSurface) -> ExtrinsicData:
    grid, u = surface.grid, surface.u
    n = grid.n
    phi = np.log(u)
    points = surface.center + u[..., None] * grid.directions()

    if grid.mode == "axisym":
        d1 = grid._d_theta(phi)
        d2, cot_d1 = sg.axisym_hessian_parts(grid, phi)
        q = d1 * d1
        v = np.sqrt(1.0 + q)
        k_meridian = (1.0 + q - d2) / (u * v ** 3)
        k_rot = (1.0 - cot_d1) / (u * v)
        kappa = np.empty(grid.shape + (n,))
        kappa[..., 0] = k_meridian
        kappa[..., 1:] = k_rot[..., None]
        H = k_meridian + (n - 1) * k_rot
        A2 = k_meridian ** 2 + (n - 1) * k_rot ** 2
        g = np.zeros(grid.shape + (n,))
        g[..., 0] = d1
        S = None
    else:
        g = sg.covariant_gradient(grid, phi)
        hess = sg.covariant_hessian(grid, phi)
        q = np.sum(g * g, axis=-1)
        v = np.sqrt(1.0 + q)
        eye = np.eye(n)
        gg = g[..., :, None] * g[..., None, :]
        P = eye - gg / (v * (v + 1.0))[..., None, None]
        S = P @ (eye + gg - hess) @ P / (u * v)[..., None, None]
        S = 0.5 * (S + np.swapaxes(S, -1, -2))
        if not np.all(np.isfinite(S)):
            raise NumericalDegeneracy("non-finite shape operator")
        try:
            kappa = np.linalg.eigvalsh(S)
        except np.linalg.LinAlgError as exc:
            raise NumericalDegeneracy(f"eigenvalue solve failed: {exc}") from exc
        H = np.trace(S, axis1=-2, axis2=-1)
        A2 = np.sum(S * S, axis=(-2, -1))

    if not np.all(np.isfinite(kappa)):
        raise NumericalDegeneracy("non-finite principal curvatures")
    kappa = np.sort(kappa, axis=-1)
    return ExtrinsicData(
        points=points,
        normals=_normals(grid, g, v),
        v=v,
        grad_phi_sq=q,
        kappa=kappa,
        H=H,
        A2=A2,
        w=A2 - H * H / n,
        shape_operator=S,
    )


def admissible(surface: GraphSurface, spec: CurvatureSpec, p: float, ext: ExtrinsicData = None) -> bool:
    """True iff every node's curvatures lie in the cone of ``spec``.

    For p > 1 the positive cone is required regardless of the family.
    """
    ext = extrinsic(surface) if ext is None else ext
    ok = np.all(in_cone(spec, ext.kappa))
    if p > 1:
        ok = ok and np.all(ext.kappa > 0)
    return bool(ok)
