"""Time integration of the scalar graph flow du/dt = v / F^p.

Also provides the exact spherical solution, which serves as the flow's clock,
and the checkpoint file format.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from . import grid as sg
from .curvature import CurvatureSpec, evaluate, gradient, in_cone
from .errors import (AdmissibilityLost, FlowError, NoPreimage, NumericalDegeneracy,
                     PastBlowup, ValidationError)
from .surface import ExtrinsicData, GraphSurface, extrinsic

log = logging.getLogger(__name__)

BLOWUP_GUARD = 0.95


# -- spherical reference solution ------------------------------------------

def blowup_time(r: float, n: int, p: float) -> float:
    """Lifespan of the spherical solution with initial radius r (inf for p <= 1)."""
    if p <= 1:
        return math.inf
    return n ** p * r ** (1 - p) / (p - 1)


def reference_radius(t: float, r: float, n: int, p: float) -> float:
    """Radius at time t of the sphere that starts with radius r."""
    if r <= 0:
        raise ValueError("initial radius must be positive")
    if p == 1:
        return r * math.exp(t / n)
    if p > 1 and t >= blowup_time(r, n, p):
        raise PastBlowup(f"t={t} is beyond the spherical lifespan {blowup_time(r, n, p)} for r={r}")
    base = (1 - p) / n ** p * t + r ** (1 - p)
    return base ** (1 / (1 - p))


def inverse_reference(rho: float, t: float, n: int, p: float) -> float:
    """Initial radius r with reference_radius(t, r) == rho."""
    if rho <= 0:
        raise NoPreimage(f"radius {rho} is not positive")
    if p == 1:
        return rho * math.exp(-t / n)
    shift = (1 - p) / n ** p * t
    base = rho ** (1 - p) - shift
    if base <= 0:
        floor = shift ** (1 / (1 - p))
        raise NoPreimage(f"radius {rho} is below the image ({floor}, inf) of R_t at t={t}")
    return base ** (1 / (1 - p))


def time_to_radius(rho: float, r: float, n: int, p: float) -> float:
    """Time at which the sphere starting at radius r reaches radius rho."""
    if p == 1:
        return n * math.log(rho / r)
    return n ** p * (rho ** (1 - p) - r ** (1 - p)) / (1 - p)


def mean_radius(surface: GraphSurface) -> float:
    grid = surface.grid
    return sg.integrate(grid, surface.u) / sg.sphere_area(grid.n)


# -- state and configuration -----------------------------------------------

@dataclass(frozen=True)
class FlowConfig:
    spec: CurvatureSpec
    p: float
    safety: float = 0.2
    theta_end: float = None
    t_end: float = None
    sample_interval: float = 0.5
    deltas: tuple = None
    checkpoint_every: float = 0.0

    def __post_init__(self):
        if not (self.p > 0 and math.isfinite(self.p)):
            raise ValidationError("p", f"need 0 < p < inf, got {self.p}")
        if not 0 < self.safety <= 1:
            raise ValidationError("safety", f"need 0 < safety <= 1, got {self.safety}")
        if self.theta_end is not None and self.t_end is not None:
            raise ValidationError("theta_end", "give either theta_end or t_end, not both")
        if not self.sample_interval > 0:
            raise ValidationError("sample_interval", "must be positive")
        if self.checkpoint_every < 0:
            raise ValidationError("checkpoint_every", "must be non-negative")

    @property
    def delta_set(self) -> tuple:
        if self.deltas is not None:
            return tuple(self.deltas)
        return default_deltas(self.p)


def default_deltas(p: float) -> tuple:
    return (2.0, 2.0 + p, 4.0 + 2.0 * p - 0.5)


@dataclass(frozen=True)
class FlowState:
    surface: GraphSurface
    t: float = 0.0
    step_count: int = 0
    dt_last: float = 0.0

    @cached_property
    def ext(self) -> ExtrinsicData:
        return extrinsic(self.surface)

    @property
    def u(self) -> np.ndarray:
        return self.surface.u


def _check_admissible(ext: ExtrinsicData, spec: CurvatureSpec, p: float):
    kappa = ext.kappa
    ok = np.asarray(in_cone(spec, kappa))
    if p > 1:
        ok = ok & np.all(kappa > 0, axis=-1)
    if not np.all(ok):
        node = tuple(int(i) for i in np.argwhere(~ok)[0])
        raise AdmissibilityLost(
            f"curvatures {kappa[node]} at node {node} left the admissible cone of {spec}"
            + (" (p > 1 requires strict convexity)" if p > 1 else ""),
            node=node, kappa=kappa[node],
        )


def speed(surface: GraphSurface, config: FlowConfig, ext: ExtrinsicData = None):
    """Normal speed v / F^p at every node, with the F field used."""
    ext = extrinsic(surface) if ext is None else ext
    _check_admissible(ext, config.spec, config.p)
    F = evaluate(config.spec, ext.kappa)
    return ext.v / F ** config.p, F


def stable_dt(state: FlowState, config: FlowConfig) -> float:
    """Explicit step size from the parabolic linearization.

    dt = safety h_min^2 min(u^2 F^(p+1)) / (n p max(v)^2 max dF/dkappa_i),
    clamped to at most ``config.sample_interval``.
    """
    ext = state.ext
    spec, p = config.spec, config.p
    _check_admissible(ext, spec, p)
    F = evaluate(spec, ext.kappa)
    dF = gradient(spec, ext.kappa)
    grid = state.surface.grid
    num = config.safety * grid.h_min ** 2 * np.min(state.u ** 2 * F ** (p + 1))
    den = grid.n * p * np.max(ext.v) ** 2 * np.max(dF)
    return float(min(num / den, config.sample_interval))


def step(state: FlowState, config: FlowConfig, dt: float = None) -> FlowState:
    """One explicit midpoint (RK2) step."""
    if dt is None:
        dt = stable_dt(state, config)
    k1, _ = speed(state.surface, config, state.ext)
    mid = state.surface.with_u(state.u + 0.5 * dt * k1)
    k2, _ = speed(mid, config)
    new = state.surface.with_u(state.u + dt * k2)
    return FlowState(new, state.t + dt, state.step_count + 1, dt)


# -- driver -----------------------------------------------------------------

REACHED_STOP = "REACHED_STOP"
ADMISSIBILITY_LOST = "ADMISSIBILITY_LOST"
DEGENERACY = "DEGENERACY"


@dataclass
class RunResult:
    stop_reason: str
    final_state: FlowState
    r0: float
    records: list = field(default_factory=list)
    samples: list = field(default_factory=list)  # (t, surface, ext)
    message: str = ""

    @property
    def steps(self) -> int:
        return self.final_state.step_count


def stop_time(config: FlowConfig, initial: GraphSurface, r0: float) -> float:
    n, p = initial.grid.n, config.p
    if config.t_end is not None:
        t_stop = float(config.t_end)
    else:
        theta_end = 10.0 if config.theta_end is None else float(config.theta_end)
        if theta_end < r0:
            raise ValidationError("theta_end", f"{theta_end} is below the initial mean radius {r0}")
        t_stop = time_to_radius(theta_end, r0, n, p)
    if p > 1:
        limit = BLOWUP_GUARD * blowup_time(float(np.min(initial.u)), n, p)
        if t_stop > limit:
            raise PastBlowup(
                f"stop time {t_stop:.6g} exceeds {BLOWUP_GUARD:.0%} of the blow-up time "
                f"of the inscribed sphere ({limit / BLOWUP_GUARD:.6g})")
    return t_stop


def sample_times(r0: float, t_stop: float, n: int, p: float, interval: float):
    """Times at which the reference radius has grown by multiples of ``interval``."""
    theta_stop = reference_radius(t_stop, r0, n, p)
    count = int(math.floor((theta_stop - r0) / interval * (1 + 1e-12))) + 1
    thetas = [r0 + k * interval for k in range(count)]
    return [0.0] + [time_to_radius(th, r0, n, p) for th in thetas[1:]], thetas


def run(config: FlowConfig, initial: GraphSurface, sinks=(), checkpoint=None) -> RunResult:
    """Integrate from ``initial`` to the configured stop.

    Every ``sample_interval`` of growth of the reference radius a diagnostics
    record is built and passed to each callable in ``sinks``.  ``checkpoint``,
    if given, is called with the state every ``checkpoint_every`` of growth.
    """
    from .roundness import diagnostics

    grid = initial.grid
    n, p = grid.n, config.p
    r0 = mean_radius(initial)
    t_stop = stop_time(config, initial, r0)
    times, thetas = sample_times(r0, t_stop, n, p, config.sample_interval)
    if abs(times[-1] - t_stop) <= 1e-12 * max(t_stop, 1.0):
        # stop falls on a sample up to roundoff; avoid an ulp-sized last step
        t_stop = times[-1]
    deltas = config.delta_set

    state = FlowState(initial)
    result = RunResult(REACHED_STOP, state, r0)
    next_ckpt = r0 + config.checkpoint_every if config.checkpoint_every > 0 else math.inf

    def emit(k):
        nonlocal next_ckpt
        rec = diagnostics(state.surface, state.t, thetas[k], deltas, ext=state.ext, dt=state.dt_last)
        result.records.append(rec)
        result.samples.append((state.t, state.surface, state.ext))
        for sink in sinks:
            sink(rec)
        if checkpoint is not None and thetas[k] >= next_ckpt * (1 - 1e-12):
            checkpoint(state)
            while next_ckpt <= thetas[k] * (1 + 1e-12):
                next_ckpt += config.checkpoint_every

    try:
        _check_admissible(state.ext, config.spec, p)
        emit(0)
        k = 1
        while state.t < t_stop:
            target = times[k] if k < len(times) else t_stop
            target = min(target, t_stop)
            dt = stable_dt(state, config)
            if state.t + dt >= target:
                dt = target - state.t
            state = step(state, config, dt)
            if state.t >= target:
                state = FlowState(state.surface, target, state.step_count, state.dt_last)
                if k < len(times) and target == times[k]:
                    emit(k)
                    k += 1
    except AdmissibilityLost as exc:
        result.stop_reason, result.message = ADMISSIBILITY_LOST, str(exc)
        log.warning("run stopped: %s", exc)
    except (NumericalDegeneracy, FlowError) as exc:
        if isinstance(exc, (PastBlowup, ValidationError)):
            raise
        result.stop_reason, result.message = DEGENERACY, f"{exc.code}: {exc}"
        log.warning("run stopped: %s", exc)
    result.final_state = state
    if checkpoint is not None and config.checkpoint_every > 0:
        checkpoint(state)
    return result


# -- checkpoints -------------------------------------------------------------

def write_checkpoint(path, state: FlowState, spec: CurvatureSpec, p: float):
    grid = state.surface.grid
    lines = [f"mode = {grid.mode}", f"n = {grid.n}", f"N_theta = {grid.n_theta}"]
    if grid.mode == "full2d":
        lines.append(f"N_lambda = {grid.n_lambda}")
    lines += [
        f"p = {p!r}",
        f"F = {spec}",
        f"t = {float(state.t)!r}",
        "center = " + " ".join(repr(float(c)) for c in state.surface.center),
    ]
    lines += [repr(float(x)) for x in state.u.ravel()]
    path = Path(path)
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write checkpoint {path}: {exc}") from exc


def read_checkpoint(path):
    """Return ``(state, spec, p)`` from a checkpoint file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read checkpoint {path}: {exc}") from exc
    header, values = {}, []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if "=" in line:
            key, _, val = line.partition("=")
            header[key.strip()] = val.strip()
        else:
            values.append(float(line))
    n = int(header["n"])
    if header["mode"] == "full2d":
        grid = sg.make_grid("full2d", n, (int(header["N_theta"]), int(header["N_lambda"])))
    else:
        grid = sg.make_grid(header["mode"], n, int(header["N_theta"]))
    u = np.array(values, dtype=float).reshape(grid.shape)
    center = np.array([float(c) for c in header["center"].split()])
    spec = CurvatureSpec.parse(header["F"], n)
    state = FlowState(GraphSurface(grid, u, center), t=float(header["t"]))
    return state, spec, float(header["p"])
