"""Invariant suites behind ``icflow check``.

Each suite returns ``(ok, detail)``.  Suites look up the curvature functions
through the module so a patched implementation is what gets checked.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from . import curvature as cf
from . import grid as sg
from . import shapes
from .flow import FlowConfig, inverse_reference, reference_radius, run
from .surface import extrinsic

N_RANDOM = 10_000


def _specs():
    for n in (2, 3, 4):
        for k in range(1, n + 1):
            yield cf.CurvatureSpec("power_sigma_k", n, k)
        yield cf.CurvatureSpec("harmonic_mean", n)


def _cone_points(spec, rng, m=N_RANDOM):
    kappa = np.exp(rng.normal(size=(m, spec.n)))
    if spec.is_linear:
        # half of the samples with mixed signs, shifted into {H > 0}
        mixed = rng.normal(size=(m // 2, spec.n))
        mixed[:, 0] += np.abs(mixed.sum(axis=1)) + 0.1 - mixed.sum(axis=1)
        kappa[: m // 2] = mixed
    return kappa


def _rel(a, b):
    return np.max(np.abs(a - b) / np.abs(b))


def suite_homogeneity(rng):
    worst = 0.0
    for spec in _specs():
        k = _cone_points(spec, rng)
        lam = rng.uniform(0.1, 10, size=len(k))
        worst = max(worst, _rel(cf.evaluate(spec, lam[:, None] * k), lam * cf.evaluate(spec, k)))
    return worst <= 1e-12, f"max rel error {worst:.2e}"


def suite_symmetry(rng):
    worst = 0.0
    for spec in _specs():
        k = _cone_points(spec, rng, 1000)
        f = cf.evaluate(spec, k)
        perms = itertools.permutations(range(spec.n)) if spec.n <= 4 else (rng.permutation(spec.n) for _ in range(10))
        for perm in perms:
            worst = max(worst, _rel(cf.evaluate(spec, k[:, list(perm)]), f))
    return worst <= 1e-12, f"max rel error {worst:.2e}"


def suite_normalization(rng):
    bad = [str(s) for s in _specs() if cf.evaluate(s, np.ones(s.n)) != s.n]
    return not bad, "F(1,...,1) = n exactly" if not bad else f"violated for {bad}"


def suite_euler(rng):
    worst = 0.0
    for spec in _specs():
        k = _cone_points(spec, rng)
        lhs = np.sum(k * cf.gradient(spec, k), axis=1)
        worst = max(worst, _rel(lhs, cf.evaluate(spec, k)))
    return worst <= 1e-12, f"max rel error {worst:.2e}"


def suite_monotonicity(rng):
    worst = math.inf
    for spec in _specs():
        worst = min(worst, float(np.min(cf.gradient(spec, _cone_points(spec, rng)))))
    return worst > 0, f"min dF/dkappa_i {worst:.2e}"


def suite_concavity(rng):
    worst = 0.0
    for spec in _specs():
        a, b = _cone_points(spec, rng), _cone_points(spec, rng)
        fa, fb = cf.evaluate(spec, a), cf.evaluate(spec, b)
        gap = (fa + fb) / 2 - cf.evaluate(spec, (a + b) / 2)
        worst = max(worst, float(np.max(gap / fa)))
    return worst <= 1e-10, f"max midpoint excess {worst:.2e}"


def suite_f_le_h(rng):
    worst = -math.inf
    for spec in _specs():
        k = _cone_points(spec, rng)
        H = k.sum(axis=1)
        worst = max(worst, float(np.max((cf.evaluate(spec, k) - H) / np.abs(H))))
    return worst <= 1e-12, f"max (F - H)/H {worst:.2e}"


def suite_grid_area(rng):
    worst = 0.0
    for mode, n in (("axisym", 2), ("axisym", 3), ("axisym", 4), ("full2d", 2)):
        g = sg.make_grid(mode, n, 32)
        area = sg.integrate(g, np.ones(g.shape))
        worst = max(worst, abs(area / sg.sphere_area(n) - 1))
    return worst <= 1e-8, f"max rel area error {worst:.2e}"


def suite_grid_convergence(rng):
    errs = []
    for N in (64, 128):
        g = sg.make_grid("axisym", 2, N)
        errs.append(np.max(np.abs(sg.gradient_norm_sq(g, np.cos(g.theta)) - np.sin(g.theta) ** 2)))
    ratio = errs[0] / errs[1]
    return 3.5 <= ratio <= 4.5, f"refinement ratio {ratio:.3f}"


def suite_sphere_curvature(rng):
    worst = 0.0
    for mode, n in (("axisym", 2), ("axisym", 3), ("full2d", 2)):
        g = sg.make_grid(mode, n, 32)
        ext = extrinsic(shapes.sphere(g, 2.5))
        worst = max(worst, float(np.max(np.abs(ext.kappa * 2.5 - 1))), float(np.max(np.abs(ext.v - 1))))
    return worst <= 1e-12, f"max deviation {worst:.2e}"


def suite_reference_radius(rng):
    worst = 0.0
    for p in (0.5, 1.0, 2.0):
        for r in (0.5, 1.0, 3.0):
            for t in (0.0, 0.3, 1.0):
                rho = reference_radius(t, r, 2, p)
                worst = max(worst, abs(inverse_reference(rho, t, 2, p) / r - 1))
    return worst <= 1e-12, f"max round-trip error {worst:.2e}"


def suite_spherical_flow(rng):
    g = sg.make_grid("axisym", 2, 32)
    cfg = FlowConfig(cf.CurvatureSpec("power_sigma_k", 2, 1), 1.0, theta_end=2.0, sample_interval=0.5)
    res = run(cfg, shapes.sphere(g, 1.0))
    st = res.final_state
    err = float(np.max(np.abs(st.u - reference_radius(st.t, 1.0, 2, 1.0))) / reference_radius(st.t, 1.0, 2, 1.0))
    spread = float(np.ptp(st.u) / st.u.max())
    return res.stop_reason == "REACHED_STOP" and err <= 1e-5 and spread <= 1e-12, (
        f"rel error {err:.2e}, spatial spread {spread:.1e}")


SUITES = [
    ("homogeneity", suite_homogeneity),
    ("symmetry", suite_symmetry),
    ("normalization", suite_normalization),
    ("euler", suite_euler),
    ("monotonicity", suite_monotonicity),
    ("concavity", suite_concavity),
    ("f_le_h", suite_f_le_h),
    ("grid_area", suite_grid_area),
    ("grid_convergence", suite_grid_convergence),
    ("sphere_curvature", suite_sphere_curvature),
    ("reference_radius", suite_reference_radius),
    ("spherical_flow", suite_spherical_flow),
]


def run_suites(seed: int = 0):
    """Run every suite; returns a list of ``(name, ok, detail)``."""
    out = []
    for name, fn in SUITES:
        rng = np.random.default_rng(seed)
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crashing suite is a failing suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out
