"""Smallest enclosing ball of a point set (Welzl, move-to-front variant).

Recursion depth is bounded by d + 1 support points; the scan for violating
points at each level is vectorized.
"""

from __future__ import annotations

import numpy as np


def _ball_through(support: np.ndarray):
    """Smallest ball with all ``support`` points on its boundary."""
    m = len(support)
    if m == 0:
        return None, -np.inf
    if m == 1:
        return support[0].copy(), 0.0
    base = support[0]
    A = support[1:] - base
    b = 0.5 * np.sum(A * A, axis=1)
    lam, *_ = np.linalg.lstsq(A @ A.T, b, rcond=None)
    c = base + lam @ A
    return c, float(np.sum((c - base) ** 2))


def _mtf(pts: np.ndarray, end: int, support: list, rtol: float):
    c, r2 = _ball_through(np.array(support) if support else np.empty((0, pts.shape[1])))
    if len(support) == pts.shape[1] + 1:
        return c, r2
    i = 0
    while i < end:
        chunk = pts[i:end]
        if c is None:
            j = i
        else:
            d2 = np.sum((chunk - c) ** 2, axis=1)
            out = np.nonzero(d2 > r2 * (1 + rtol) + rtol)[0]
            if out.size == 0:
                break
            j = i + int(out[0])
        c, r2 = _mtf(pts, j, support + [pts[j].copy()], rtol)
        pts[: j + 1] = np.roll(pts[: j + 1], 1, axis=0)
        i = j + 1
    return c, r2


def enclosing_ball(points, rtol: float = 1e-12, seed: int = 0):
    """Return ``(center, radius)`` of the smallest ball containing ``points`` (m, d)."""
    pts = np.array(points, dtype=float).reshape(-1, np.shape(points)[-1])
    if len(pts) == 0:
        raise ValueError("no points")
    rng = np.random.default_rng(seed)
    pts = pts[rng.permutation(len(pts))]
    c, r2 = _mtf(pts, len(pts), [], rtol)
    return c, float(np.sqrt(max(r2, 0.0)))
