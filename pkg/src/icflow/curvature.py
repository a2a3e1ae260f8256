"""Admissible curvature functions F of the principal curvatures.

Two families are supported, both normalized so that ``F(1, ..., 1) = n``:

* ``power_sigma_k``: ``F = n * (sigma_k(kappa) / C(n, k)) ** (1/k)``; ``k = 1``
  gives the mean curvature ``H``.
* ``harmonic_mean``: ``F = n**2 / sum(1 / kappa_i)``.

All functions accept a single curvature vector of shape ``(n,)`` or a batch of
shape ``(..., n)`` and are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import ConeViolation, ValidationError

FAMILIES = ("power_sigma_k", "harmonic_mean")


@dataclass(frozen=True)
class CurvatureSpec:
    family: str
    n: int
    k: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError("F", f"unknown curvature family {self.family!r}")
        if self.n < 2:
            raise ValidationError("n", "dimension must be at least 2")
        if self.family == "power_sigma_k" and not 1 <= self.k <= self.n:
            raise ValidationError("F", f"sigma_k needs 1 <= k <= n={self.n}, got k={self.k}")

    @property
    def is_linear(self) -> bool:
        return self.family == "power_sigma_k" and self.k == 1

    @classmethod
    def parse(cls, text: str, n: int) -> "CurvatureSpec":
        """Build a spec from the config spelling ``sigma_k:<k>`` or ``harmonic``."""
        text = text.strip()
        if text == "harmonic":
            return cls("harmonic_mean", n)
        if text.startswith("sigma_k:"):
            try:
                k = int(text.split(":", 1)[1])
            except ValueError:
                raise ValidationError("F", f"bad sigma_k order in {text!r}") from None
            return cls("power_sigma_k", n, k)
        raise ValidationError("F", f"expected 'sigma_k:<k>' or 'harmonic', got {text!r}")

    def __str__(self) -> str:
        if self.family == "harmonic_mean":
            return "harmonic"
        return f"sigma_k:{self.k}"


def elementary_symmetric(kappa: np.ndarray, k: int) -> np.ndarray:
    """sigma_k over the last axis, by the usual one-pass recurrence."""
    kappa = np.asarray(kappa, dtype=float)
    e = [np.ones(kappa.shape[:-1])] + [np.zeros(kappa.shape[:-1]) for _ in range(k)]
    for i in range(kappa.shape[-1]):
        ki = kappa[..., i]
        for j in range(k, 0, -1):
            e[j] = e[j] + ki * e[j - 1]
    return e[k]


def in_cone(spec: CurvatureSpec, kappa) -> np.ndarray | bool:
    """Membership of kappa in the cone of ``spec``.

    ``sigma_k:1`` uses the half space ``H > 0``; every nonlinear family uses
    the positive cone.
    """
    kappa = np.asarray(kappa, dtype=float)
    finite = np.all(np.isfinite(kappa), axis=-1)
    if spec.is_linear:
        inside = np.sum(kappa, axis=-1) > 0
    else:
        inside = np.all(kappa > 0, axis=-1)
    result = finite & inside
    return bool(result) if result.ndim == 0 else result


def _check_cone(spec, kappa):
    kappa = np.asarray(kappa, dtype=float)
    if kappa.shape[-1] != spec.n:
        raise ValueError(f"expected {spec.n} principal curvatures, got shape {kappa.shape}")
    inside = np.asarray(in_cone(spec, kappa))
    if not np.all(inside):
        bad = np.argwhere(~inside)[0]
        where = tuple(int(i) for i in bad)
        raise ConeViolation(
            f"curvatures {kappa[where] if where else kappa} at {where} outside the cone of {spec}"
        )
    return kappa


def evaluate(spec: CurvatureSpec, kappa):
    kappa = _check_cone(spec, kappa)
    n = spec.n
    if spec.family == "harmonic_mean":
        out = n * n / np.sum(1.0 / kappa, axis=-1)
    elif spec.k == 1:
        out = np.sum(kappa, axis=-1)
    else:
        sk = elementary_symmetric(kappa, spec.k)
        out = n * (sk / comb(n, spec.k)) ** (1.0 / spec.k)
    return float(out) if np.ndim(out) == 0 else out


def gradient(spec: CurvatureSpec, kappa) -> np.ndarray:
    """Partial derivatives dF/dkappa_i, same shape as ``kappa``."""
    kappa = _check_cone(spec, kappa)
    n = spec.n
    if spec.family == "harmonic_mean":
        s = np.sum(1.0 / kappa, axis=-1, keepdims=True)
        return n * n / (kappa * kappa * s * s)
    if spec.k == 1:
        return np.ones_like(kappa)
    k = spec.k
    sk = elementary_symmetric(kappa, k)
    f = n * (sk / comb(n, k)) ** (1.0 / k)
    out = np.empty_like(kappa)
    for i in range(n):
        rest = np.delete(kappa, i, axis=-1)
        out[..., i] = elementary_symmetric(rest, k - 1)
    return out * (f / (k * sk))[..., None]
