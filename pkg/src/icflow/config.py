"""Line-based ``key = value`` run configuration.

``#`` starts a comment.  Unknown or repeated keys are errors.  ``p``, ``F``
and ``initial`` are required; every other key has a default:

    mode = axisym            # or full2d (n = 2 only)
    n = 2
    N_theta = 64
    N_lambda = 2 * N_theta   # full2d only
    safety = 0.2
    theta_end = 10           # unless t_end is given
    sample_interval = 0.5    # in units of reference-radius growth
    checkpoint_every = 0     # 0 disables checkpoints
    deltas = 2, 2+p, 4+2p-0.5
    seed = 0
    csv = diagnostics.csv
    checkpoint_dir =         # empty: next to the CSV

Initial surfaces::

    initial = sphere r=1 [offset=0.3]
    initial = perturbed_sphere r=1 modes=2:0.1,4:0.02
    initial = ellipsoid a=1 c=1.5
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .curvature import CurvatureSpec
from .errors import ParseError, ValidationError
from .flow import FlowConfig, default_deltas
from .grid import MIN_NODES, MODES, make_grid
from . import shapes

MAX_NODES = 4096
INITIAL_KINDS = {
    "sphere": ("r",),
    "perturbed_sphere": ("r", "modes"),
    "ellipsoid": ("a", "c"),
}
OPTIONAL_INITIAL = {"sphere": ("offset",)}


@dataclass(frozen=True)
class InitialSurface:
    kind: str
    params: tuple  # sorted (name, value) pairs; modes as a tuple of (k, a)

    def get(self, name, default=None):
        return dict(self.params).get(name, default)

    def build(self, grid):
        if self.kind == "sphere":
            return shapes.sphere(grid, self.get("r"), offset=self.get("offset"))
        if self.kind == "perturbed_sphere":
            return shapes.perturbed_sphere(grid, self.get("r"), self.get("modes"))
        return shapes.ellipsoid(grid, self.get("a"), self.get("c"))

    def __str__(self):
        parts = [self.kind]
        for name, value in self.params:
            if name == "modes":
                value = ",".join(f"{k}:{a!r}" for k, a in value)
            else:
                value = repr(value)
            parts.append(f"{name}={value}")
        return " ".join(parts)


@dataclass(frozen=True)
class RunConfig:
    p: float
    F: str
    initial: InitialSurface
    mode: str = "axisym"
    n: int = 2
    N_theta: int = 64
    N_lambda: int = None
    safety: float = 0.2
    theta_end: float = None
    t_end: float = None
    sample_interval: float = 0.5
    checkpoint_every: float = 0.0
    deltas: tuple = None
    seed: int = 0
    csv: str = "diagnostics.csv"
    checkpoint_dir: str = None

    @property
    def spec(self) -> CurvatureSpec:
        return CurvatureSpec.parse(self.F, self.n)

    @property
    def resolution(self):
        if self.mode == "full2d":
            return (self.N_theta, self.N_lambda or 2 * self.N_theta)
        return self.N_theta

    def grid(self):
        return make_grid(self.mode, self.n, self.resolution)

    def flow_config(self) -> FlowConfig:
        return FlowConfig(
            spec=self.spec, p=self.p, safety=self.safety,
            theta_end=self.theta_end, t_end=self.t_end,
            sample_interval=self.sample_interval,
            deltas=self.deltas, checkpoint_every=self.checkpoint_every,
        )

    def initial_surface(self):
        return self.initial.build(self.grid())


def _number(field, text):
    try:
        value = float(text)
    except ValueError:
        raise ValidationError(field, f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise ValidationError(field, f"must be finite, got {text!r}")
    return value


def _integer(field, text):
    try:
        return int(text)
    except ValueError:
        raise ValidationError(field, f"not an integer: {text!r}") from None


def parse_initial(text: str) -> InitialSurface:
    tokens = text.split()
    if not tokens:
        raise ValidationError("initial", "empty surface descriptor")
    kind, rest = tokens[0], tokens[1:]
    if kind not in INITIAL_KINDS:
        raise ValidationError("initial", f"unknown surface {kind!r}; expected one of {sorted(INITIAL_KINDS)}")
    allowed = INITIAL_KINDS[kind] + OPTIONAL_INITIAL.get(kind, ())
    params = {}
    for tok in rest:
        name, eq, value = tok.partition("=")
        if not eq or name not in allowed:
            raise ValidationError("initial", f"unexpected parameter {tok!r} for {kind}")
        if name in params:
            raise ValidationError("initial", f"parameter {name!r} given twice")
        if name == "modes":
            modes = []
            for item in value.split(","):
                k, colon, a = item.partition(":")
                if not colon:
                    raise ValidationError("initial", f"mode {item!r} is not <wavenumber>:<amplitude>")
                modes.append((_integer("initial", k), _number("initial", a)))
            params[name] = tuple(modes)
        else:
            params[name] = _number("initial", value)
    missing = [name for name in INITIAL_KINDS[kind] if name not in params]
    if missing:
        raise ValidationError("initial", f"{kind} needs {', '.join(missing)}")

    for name in ("r", "a", "c"):
        if name in params and params[name] <= 0:
            raise ValidationError("initial", f"{name} must be positive")
    if kind == "sphere" and abs(params.get("offset", 0.0)) >= params["r"]:
        raise ValidationError("initial", "offset must be smaller than r (graph center inside the sphere)")
    if kind == "perturbed_sphere":
        if any(k < 0 for k, _ in params["modes"]):
            raise ValidationError("initial", "wavenumbers must be non-negative")
        if sum(abs(a) for _, a in params["modes"]) >= 1:
            raise ValidationError("initial", "sum of |amplitudes| must be < 1 so that u > 0")
    return InitialSurface(kind, tuple(sorted(params.items())))


_CONVERTERS = {
    "p": _number, "safety": _number, "theta_end": _number, "t_end": _number,
    "sample_interval": _number, "checkpoint_every": _number,
    "n": _integer, "N_theta": _integer, "N_lambda": _integer, "seed": _integer,
}


def _convert(key, text):
    if key in _CONVERTERS:
        return _CONVERTERS[key](key, text)
    if key == "initial":
        return parse_initial(text)
    if key == "deltas":
        return tuple(_number("deltas", part) for part in text.split(","))
    if key in ("checkpoint_dir",):
        return text or None
    return text


def parse_config(text: str) -> RunConfig:
    known = {f.name for f in fields(RunConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not eq or not key:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        if key not in known:
            raise ParseError(f"unknown key {key!r}", line=lineno)
        if key in values:
            raise ParseError(f"key {key!r} given twice", line=lineno)
        values[key] = _convert(key, value)
    for req in ("p", "F", "initial"):
        if req not in values:
            raise ValidationError(req, "required")
    cfg = RunConfig(**values)
    if cfg.theta_end is None and cfg.t_end is None:
        cfg = replace(cfg, theta_end=10.0)
    if cfg.deltas is None:
        cfg = replace(cfg, deltas=default_deltas(cfg.p))
    if cfg.mode == "full2d" and cfg.N_lambda is None:
        cfg = replace(cfg, N_lambda=2 * cfg.N_theta)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig):
    if not cfg.p > 0:
        raise ValidationError("p", f"need 0 < p < inf, got {cfg.p}")
    if cfg.mode not in MODES:
        raise ValidationError("mode", f"expected one of {MODES}, got {cfg.mode!r}")
    if cfg.n < 2:
        raise ValidationError("n", "must be at least 2")
    if cfg.mode == "full2d" and cfg.n != 2:
        raise ValidationError("n", "full2d mode requires n = 2")
    if cfg.mode == "axisym" and cfg.N_lambda is not None:
        raise ValidationError("N_lambda", "only meaningful in full2d mode")
    for name in ("N_theta", "N_lambda"):
        value = getattr(cfg, name)
        if value is not None and not MIN_NODES <= value <= MAX_NODES:
            raise ValidationError(name, f"must be in [{MIN_NODES}, {MAX_NODES}], got {value}")
    if cfg.N_lambda is not None and cfg.N_lambda % 2:
        raise ValidationError("N_lambda", "must be even")
    cfg.spec  # raises on a bad F
    if not 0 < cfg.safety <= 1:
        raise ValidationError("safety", "must lie in (0, 1]")
    if cfg.theta_end is not None and cfg.t_end is not None:
        raise ValidationError("t_end", "give either theta_end or t_end")
    for name in ("theta_end", "t_end", "sample_interval"):
        value = getattr(cfg, name)
        if value is not None and not value > 0:
            raise ValidationError(name, "must be positive")
    if cfg.checkpoint_every < 0:
        raise ValidationError("checkpoint_every", "must be non-negative")
    if cfg.deltas is not None:
        if len(cfg.deltas) != 3:
            raise ValidationError("deltas", "exactly three exponents are logged (pinch_d1..pinch_d3)")
        if any(d <= 0 for d in cfg.deltas):
            raise ValidationError("deltas", "exponents must be positive")


def format_config(cfg: RunConfig) -> str:
    """Canonical text form; ``parse_config(format_config(c)) == c``."""
    lines = []
    for f in fields(RunConfig):
        value = getattr(cfg, f.name)
        if value is None:
            continue
        if f.name == "deltas":
            value = ", ".join(repr(float(d)) for d in value)
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"
