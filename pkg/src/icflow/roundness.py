"""Roundness and pinching diagnostics, and the fitted spherical flow.

Everything that needs the surface re-graphed about another point ``y`` works
with the distances ``|P - y|`` of the surface nodes P: for a surface that is
a radial graph about y these are exactly the values of ``u_y``, so
``max u_y``, ``min u_y`` and ``osc u_y`` need no interpolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import DegenerateSeries, NonpositiveH, RegraphFailed
from .flow import inverse_reference, reference_radius
from .miniball import enclosing_ball
from .surface import ExtrinsicData, GraphSurface, extrinsic


@dataclass
class DiagnosticsRecord:
    t: float
    theta: float
    center: np.ndarray          # oscillation minimizing center y_t
    osc_u: float                # osc u_{y_t}
    rho_plus: float
    rho_minus: float
    osc_support: float          # osc of <x - y_t, nu>
    v_max: float
    grad_phi_sq_max: float
    w_max: float
    H_min: float
    H_max: float
    u_min: float
    u_max: float
    kappa_min: float
    pinch: dict = field(default_factory=dict)
    dt: float = 0.0


@dataclass
class SphereFitResult:
    Q: np.ndarray
    R_star: float
    t: np.ndarray
    R_upper: np.ndarray         # R_t^{-1}(sup u_Q)
    R_lower: np.ndarray         # R_t^{-1}(inf u_Q)
    R_mid: np.ndarray
    R_t: np.ndarray             # radius of the fitted spherical flow
    hausdorff: np.ndarray       # max |u_Q - R_t|
    scaled_hausdorff: np.ndarray
    osc_support_Q: np.ndarray   # osc <x - Q, nu>
    kappa_min: np.ndarray


def _ext(surface, ext):
    return extrinsic(surface) if ext is None else ext


def _flat(a):
    return a.reshape(-1, a.shape[-1])


def _dist(points, y):
    return np.sqrt(np.sum((points - y) ** 2, axis=1))


def regraph_valid(points, normals, y) -> bool:
    """Whether the surface is a radial graph about y (support function positive)."""
    return bool(np.all(np.einsum("ia,ia->i", points - y, normals) > 0))


class _CenterSearch:
    """Parametrizes admissible centers: the symmetry axis in axisym mode, R^(n+1) otherwise."""

    def __init__(self, surface: GraphSurface, ext: ExtrinsicData):
        self.surface = surface
        self.axisym = surface.grid.mode == "axisym"
        self.points = _flat(ext.points)
        self.normals = _flat(ext.normals)
        self.scale = float(np.mean(_dist(self.points, surface.center)))

    def point(self, x):
        if self.axisym:
            y = self.surface.center.copy()
            y[-1] += float(x[0])
            return y
        return np.asarray(x, dtype=float)

    def param(self, y):
        return np.array([y[-1] - self.surface.center[-1]]) if self.axisym else np.array(y, float)

    def valid(self, y) -> bool:
        return regraph_valid(self.points, self.normals, y)

    def minimize(self, objective, y0):
        """Nelder-Mead with restarts; invalid centers evaluate to +inf."""

        def f(x):
            y = self.point(x)
            return objective(y) if self.valid(y) else math.inf

        tol = 1e-10 * self.scale
        x = self.param(y0)
        fx = f(x)
        step = 0.05 * self.scale
        for _ in range(8):
            dim = len(x)
            simplex = np.vstack([x] + [x + step * e for e in np.eye(dim)])
            res = minimize(f, x, method="Nelder-Mead", options=dict(
                initial_simplex=simplex, xatol=tol, fatol=tol, maxiter=4000 * dim, maxfev=4000 * dim))
            moved = float(np.linalg.norm(res.x - x))
            improved = res.fun < fx
            if improved:
                x, fx = res.x, float(res.fun)
            if not improved or moved < 10 * tol:
                break
            step = max(10 * moved, 1e3 * tol)
        return self.point(x), fx


def area_centroid(surface: GraphSurface, ext: ExtrinsicData = None) -> np.ndarray:
    """Area-weighted mean of the node positions (area element u^n v dsigma)."""
    ext = _ext(surface, ext)
    grid = surface.grid
    w = grid.weights * surface.u ** grid.n * ext.v
    c = np.sum(w[..., None] * ext.points, axis=tuple(range(w.ndim))) / np.sum(w)
    if grid.mode == "axisym":
        y = surface.center.copy()
        y[-1] = c[-1]
        return y
    return c


def osc_u(points, y) -> float:
    d = _dist(points, y)
    return float(d.max() - d.min())


def osc_minimizing_center(surface: GraphSurface, ext: ExtrinsicData = None):
    """Center y minimizing osc u_y among centers the surface is a graph about.

    Returns ``(y, osc)``.
    """
    ext = _ext(surface, ext)
    search = _CenterSearch(surface, ext)
    start = area_centroid(surface, ext)
    if not search.valid(start):
        start = surface.center
        if not search.valid(start):
            raise RegraphFailed("surface is not a radial graph about its centroid or graph center")
    y, osc = search.minimize(lambda y: osc_u(search.points, y), start)
    return y, osc


def _circumball(surface: GraphSurface, ext: ExtrinsicData):
    pts = _flat(ext.points)
    if surface.grid.mode == "axisym":
        c = surface.center
        rho = np.sqrt(np.sum((pts[:, :-1] - c[:-1]) ** 2, axis=1))
        z = pts[:, -1] - c[-1]
        plane = np.concatenate([np.stack([rho, z], 1), np.stack([-rho, z], 1)])
        center2, r = enclosing_ball(plane)
        y = c.copy()
        y[-1] += center2[1]
        return y, r
    return enclosing_ball(pts)


def circumradius_inradius(surface: GraphSurface, ext: ExtrinsicData = None, y_hint=None):
    """``(rho_plus, rho_minus)``: enclosing ball radius of the nodes and the
    largest node-free ball about an interior center."""
    ext = _ext(surface, ext)
    _, rho_plus = _circumball(surface, ext)
    search = _CenterSearch(surface, ext)
    if y_hint is None:
        y_hint, _ = osc_minimizing_center(surface, ext)
    rho_minus = float(_dist(search.points, y_hint).min())
    y, neg = search.minimize(lambda y: -_dist(search.points, y).min(), y_hint)
    if math.isfinite(neg):
        rho_minus = max(rho_minus, -neg)
    return float(rho_plus), rho_minus


def support_function(surface: GraphSurface, q, ext: ExtrinsicData = None):
    """``(field, osc)`` of the support function <x - q, nu> at the nodes."""
    ext = _ext(surface, ext)
    ubar = np.einsum("...a,...a->...", ext.points - np.asarray(q, float), ext.normals)
    return ubar, float(ubar.max() - ubar.min())


def gradient_function_about(surface: GraphSurface, y, ext: ExtrinsicData = None) -> np.ndarray:
    """v of the graph representation about y, from u_y / v = <x - y, nu>."""
    ext = _ext(surface, ext)
    d = np.sqrt(np.sum((ext.points - y) ** 2, axis=-1))
    ubar, _ = support_function(surface, y, ext)
    return d / ubar


def pinching(surface: GraphSurface, deltas, ext: ExtrinsicData = None):
    """``({delta: sup (k_max - k_min)^2 / H^delta}, max w)``."""
    ext = _ext(surface, ext)
    H = ext.H
    if np.any(H <= 0):
        raise NonpositiveH(f"mean curvature not positive (min H = {H.min()})")
    spread = (ext.kappa[..., -1] - ext.kappa[..., 0]) ** 2
    ratios = {float(d): float(np.max(spread / H ** d)) for d in deltas}
    return ratios, float(np.max(ext.w))


def diagnostics(surface: GraphSurface, t: float, theta: float, deltas,
                ext: ExtrinsicData = None, dt: float = 0.0) -> DiagnosticsRecord:
    ext = _ext(surface, ext)
    y, osc = osc_minimizing_center(surface, ext)
    rho_plus, rho_minus = circumradius_inradius(surface, ext, y_hint=y)
    _, osc_sup = support_function(surface, y, ext)
    pinch, w_max = pinching(surface, deltas, ext)
    return DiagnosticsRecord(
        t=float(t), theta=float(theta), center=y, osc_u=osc,
        rho_plus=rho_plus, rho_minus=rho_minus, osc_support=osc_sup,
        v_max=float(ext.v.max()), grad_phi_sq_max=float(ext.grad_phi_sq.max()),
        w_max=w_max, H_min=float(ext.H.min()), H_max=float(ext.H.max()),
        u_min=float(surface.u.min()), u_max=float(surface.u.max()),
        kappa_min=ext.kappa_min, pinch=pinch, dt=float(dt),
    )


def sphere_fit(samples, n: int, p: float, Q_hint=None) -> SphereFitResult:
    """Fit the spherical flow the samples approach.

    ``samples`` is a time-ordered list of ``(t, surface)`` or
    ``(t, surface, ext)``.  Without ``Q_hint`` the center is the oscillation
    minimizing center of the last sample.
    """
    if len(samples) < 3:
        raise ValueError("sphere_fit needs at least 3 samples")
    rows = []
    for s in samples:
        t, surf = s[0], s[1]
        ext = s[2] if len(s) > 2 and s[2] is not None else extrinsic(surf)
        rows.append((float(t), surf, ext))
    if Q_hint is None:
        Q, _ = osc_minimizing_center(rows[-1][1], rows[-1][2])
    else:
        Q = np.asarray(Q_hint, dtype=float)

    m = len(rows)
    ts = np.array([r[0] for r in rows])
    up, lo, osc_q, kmin = (np.empty(m) for _ in range(4))
    dists = []
    for i, (t, surf, ext) in enumerate(rows):
        d = _dist(_flat(ext.points), Q)
        dists.append(d)
        up[i] = inverse_reference(float(d.max()), t, n, p)
        lo[i] = inverse_reference(float(d.min()), t, n, p)
        _, osc_q[i] = support_function(surf, Q, ext)
        kmin[i] = ext.kappa_min
    mid = 0.5 * (up + lo)
    r_star = float(mid[-1])
    R_t = np.array([reference_radius(t, r_star, n, p) for t in ts])
    haus = np.array([float(np.max(np.abs(d - R))) for d, R in zip(dists, R_t)])
    return SphereFitResult(
        Q=Q, R_star=r_star, t=ts, R_upper=up, R_lower=lo, R_mid=mid, R_t=R_t,
        hausdorff=haus, scaled_hausdorff=haus * R_t ** (p / 2),
        osc_support_Q=osc_q, kappa_min=kmin,
    )


def fit_decay_exponent(series):
    """Least-squares line through (log Theta, log q); returns ``(slope, c)``
    with q ~ c Theta^slope."""
    arr = np.asarray(series, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 5 or arr.shape[1] != 2:
        raise DegenerateSeries(f"need at least 5 (Theta, q) points, got {arr.shape[0] if arr.ndim else 0}")
    theta, q = arr[:, 0], arr[:, 1]
    if np.any(q <= 0) or np.any(theta <= 0) or not np.all(np.isfinite(arr)):
        raise DegenerateSeries("all Theta and q must be positive and finite")
    if np.any(np.diff(theta) <= 0):
        raise DegenerateSeries("Theta must be strictly increasing")
    A = np.stack([np.log(theta), np.ones_like(theta)], axis=1)
    (slope, intercept), *_ = np.linalg.lstsq(A, np.log(q), rcond=None)
    return float(slope), float(math.exp(intercept))
