"""Problem data model, the instance file format, ground-truth surfaces and meshes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .rng import SplitMix64

Point = tuple[float, float]

TRUTH_TOLERANCE = 1e-9
HEADER_KEYS = ("surface", "budget", "probe_time", "speed", "depot", "mesh_step")


class InstanceError(ValueError):
    """Base class for everything the loader can complain about."""


class InstanceSyntaxError(InstanceError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class InstanceValidationError(InstanceError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


class TruthMismatchError(InstanceError):
    pass


@dataclass(frozen=True)
class Surface:
    x_min: float = 0.0
    x_max: float = 1.0
    y_min: float = 0.0
    y_max: float = 1.0

    def __post_init__(self):
        for name in ("x_min", "x_max", "y_min", "y_max"):
            if not math.isfinite(getattr(self, name)):
                raise InstanceValidationError("surface", f"{name} is not finite")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise InstanceValidationError("surface", "requires x_min < x_max and y_min < y_max")

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min


@dataclass(frozen=True)
class Sample:
    x: float
    y: float
    z: float

    @property
    def point(self) -> Point:
        return (self.x, self.y)


@dataclass(frozen=True)
class Bump:
    """One isotropic Gaussian component of a ground-truth surface."""

    weight: float
    cx: float
    cy: float
    spread: float


@dataclass(frozen=True)
class TrueFunction:
    components: tuple[Bump, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise InstanceValidationError("truth_component", "at least one component is required")
        for c in self.components:
            if not c.spread > 0:
                raise InstanceValidationError("truth_component", f"spread must be positive, got {c.spread!r}")
            if not all(math.isfinite(v) for v in (c.weight, c.cx, c.cy, c.spread)):
                raise InstanceValidationError("truth_component", "non-finite value")

    def __call__(self, x: float, y: float) -> float:
        return evaluate_truth(self, (x, y))

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorised evaluation over an ``(n, 2)`` array of points."""
        points = np.asarray(points, dtype=float)
        out = np.zeros(len(points))
        for c in self.components:
            d2 = (points[:, 0] - c.cx) ** 2 + (points[:, 1] - c.cy) ** 2
            out += c.weight * np.exp(-d2 / (2.0 * c.spread**2))
        return out


def evaluate_truth(f: TrueFunction, p: Point) -> float:
    x, y = p
    total = 0.0
    for c in f.components:
        d2 = (x - c.cx) ** 2 + (y - c.cy) ** 2
        total += c.weight * math.exp(-d2 / (2.0 * c.spread**2))
    return total


@dataclass(frozen=True)
class Instance:
    surface: Surface = field(default_factory=Surface)
    budget_T: float = 100.0
    probe_time_t: float = 1.0
    speed_s: float = 1.0
    depot: Point = (0.0, 0.0)
    initial_samples: tuple[Sample, ...] = ()
    mesh_step: float = 0.01
    truth: TrueFunction | None = None

    def __post_init__(self):
        object.__setattr__(self, "initial_samples", tuple(self.initial_samples))
        object.__setattr__(self, "depot", (float(self.depot[0]), float(self.depot[1])))
        validate(self)

    def without_truth(self) -> "Instance":
        return replace(self, truth=None)

    @property
    def points(self) -> list[Point]:
        return [s.point for s in self.initial_samples]


def _finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise InstanceValidationError(name, f"must be finite, got {value!r}")


def validate(inst: Instance) -> None:
    for name in ("budget_T", "probe_time_t", "speed_s", "mesh_step"):
        _finite(name, getattr(inst, name))
    if not inst.budget_T > 0:
        raise InstanceValidationError("budget_T", f"must be > 0, got {inst.budget_T!r}")
    if not inst.probe_time_t >= 0:
        raise InstanceValidationError("probe_time_t", f"must be >= 0, got {inst.probe_time_t!r}")
    if not inst.speed_s > 0:
        raise InstanceValidationError("speed_s", f"must be > 0, got {inst.speed_s!r}")
    if not inst.mesh_step > 0:
        raise InstanceValidationError("mesh_step", f"must be > 0, got {inst.mesh_step!r}")
    _finite("depot", inst.depot[0])
    _finite("depot", inst.depot[1])
    if not inst.surface.contains(*inst.depot):
        raise InstanceValidationError("depot", f"{inst.depot} lies outside the surface")
    for i, s in enumerate(inst.initial_samples):
        for v in (s.x, s.y, s.z):
            _finite("sample", v)
        if not inst.surface.contains(s.x, s.y):
            raise InstanceValidationError("sample", f"sample {i} at ({s.x}, {s.y}) lies outside the surface")
    if inst.truth is not None:
        for i, s in enumerate(inst.initial_samples):
            expected = evaluate_truth(inst.truth, s.point)
            if abs(expected - s.z) > TRUTH_TOLERANCE:
                raise TruthMismatchError(
                    f"sample {i} at ({s.x}, {s.y}) has z={s.z!r} but truth gives {expected!r}"
                )


# -- file format ------------------------------------------------------------

def _floats(tokens: Sequence[str], n: int, key: str, lineno: int) -> list[float]:
    if len(tokens) != n:
        raise InstanceSyntaxError(lineno, f"'{key}' expects {n} value(s), got {len(tokens)}")
    try:
        return [float(t) for t in tokens]
    except ValueError:
        raise InstanceSyntaxError(lineno, f"'{key}' has a non-numeric value: {' '.join(tokens)}") from None


def parse_instance(text: str | Iterable[str]) -> Instance:
    """Parse the line-oriented instance format.

    Header keys must appear once each, in the order of ``HEADER_KEYS``;
    they are followed by any number of ``truth_component`` lines and then
    any number of ``sample`` lines.
    """
    lines = text.splitlines() if isinstance(text, str) else list(text)
    header: dict[str, list[float]] = {}
    bumps: list[Bump] = []
    samples: list[Sample] = []
    arity = {"surface": 4, "budget": 1, "probe_time": 1, "speed": 1, "depot": 2, "mesh_step": 1}

    for lineno, raw in enumerate(lines, start=1):
        content = raw.split("#", 1)[0].split()
        if not content:
            continue
        key, tokens = content[0], content[1:]
        if key in arity:
            expected = HEADER_KEYS[len(header)] if len(header) < len(HEADER_KEYS) else None
            if key in header:
                raise InstanceSyntaxError(lineno, f"duplicate key '{key}'")
            if key != expected:
                raise InstanceSyntaxError(lineno, f"expected '{expected}', found '{key}'")
            header[key] = _floats(tokens, arity[key], key, lineno)
        elif key == "truth_component":
            if len(header) < len(HEADER_KEYS):
                raise InstanceSyntaxError(lineno, f"'{key}' before header key '{HEADER_KEYS[len(header)]}'")
            if samples:
                raise InstanceSyntaxError(lineno, "'truth_component' lines must precede 'sample' lines")
            bumps.append(Bump(*_floats(tokens, 4, key, lineno)))
        elif key == "sample":
            if len(header) < len(HEADER_KEYS):
                raise InstanceSyntaxError(lineno, f"'{key}' before header key '{HEADER_KEYS[len(header)]}'")
            samples.append(Sample(*_floats(tokens, 3, key, lineno)))
        else:
            raise InstanceSyntaxError(lineno, f"unknown key '{key}'")

    if len(header) < len(HEADER_KEYS):
        raise InstanceSyntaxError(len(lines), f"missing key '{HEADER_KEYS[len(header)]}'")

    return Instance(
        surface=Surface(*header["surface"]),
        budget_T=header["budget"][0],
        probe_time_t=header["probe_time"][0],
        speed_s=header["speed"][0],
        depot=tuple(header["depot"]),
        initial_samples=tuple(samples),
        mesh_step=header["mesh_step"][0],
        truth=TrueFunction(tuple(bumps)) if bumps else None,
    )


def _fmt(*values: float) -> str:
    # repr() is the shortest decimal that round-trips the binary value
    return " ".join(repr(float(v)) for v in values)


def serialize_instance(inst: Instance) -> str:
    s = inst.surface
    out = [
        f"surface {_fmt(s.x_min, s.x_max, s.y_min, s.y_max)}",
        f"budget {_fmt(inst.budget_T)}",
        f"probe_time {_fmt(inst.probe_time_t)}",
        f"speed {_fmt(inst.speed_s)}",
        f"depot {_fmt(*inst.depot)}",
        f"mesh_step {_fmt(inst.mesh_step)}",
    ]
    if inst.truth is not None:
        out += [f"truth_component {_fmt(c.weight, c.cx, c.cy, c.spread)}" for c in inst.truth.components]
    out += [f"sample {_fmt(p.x, p.y, p.z)}" for p in inst.initial_samples]
    return "\n".join(out) + "\n"


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


# -- meshes and generators ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class EvalMesh:
    xs: np.ndarray
    ys: np.ndarray
    points: np.ndarray  # (K, 2), x-major: all y for xs[0], then xs[1], ...

    def __len__(self) -> int:
        return len(self.points)


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    count = math.floor((hi - lo) / step + 1e-9) + 1
    values = [lo + i * step for i in range(count)]
    if abs(values[-1] - hi) <= 1e-9 * max(1.0, abs(hi)):
        values[-1] = hi
    return np.array(values)


def build_mesh(surface: Surface, step: float) -> EvalMesh:
    if not step > 0:
        raise ValueError(f"mesh step must be positive, got {step!r}")
    xs = _axis(surface.x_min, surface.x_max, step)
    ys = _axis(surface.y_min, surface.y_max, step)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    points = np.column_stack([gx.ravel(), gy.ravel()])
    for arr in (xs, ys, points):
        arr.setflags(write=False)
    return EvalMesh(xs, ys, points)


@dataclass(frozen=True)
class InstanceConfig:
    """Everything in an instance except the initial samples and the truth."""

    surface: Surface = field(default_factory=Surface)
    budget_T: float = 100.0
    probe_time_t: float = 1.0
    speed_s: float = 1.0
    depot: Point = (0.0, 0.0)
    mesh_step: float = 0.01

    def build(self, samples: Sequence[Sample], truth: TrueFunction | None) -> Instance:
        return Instance(
            surface=self.surface,
            budget_T=self.budget_T,
            probe_time_t=self.probe_time_t,
            speed_s=self.speed_s,
            depot=self.depot,
            initial_samples=tuple(samples),
            mesh_step=self.mesh_step,
            truth=truth,
        )


def interior_grid(surface: Surface, side: int) -> list[Point]:
    """The ``side x side`` grid at fractions ``1/(side+1), ..., side/(side+1)``."""
    if side < 1:
        raise ValueError(f"grid side must be >= 1, got {side}")
    fx = [surface.x_min + surface.width * i / (side + 1) for i in range(1, side + 1)]
    fy = [surface.y_min + surface.height * j / (side + 1) for j in range(1, side + 1)]
    return [(x, y) for x in fx for y in fy]


def generate_grid_instance(f: TrueFunction, side: int, config: InstanceConfig = InstanceConfig()) -> Instance:
    samples = [Sample(x, y, evaluate_truth(f, (x, y))) for x, y in interior_grid(config.surface, side)]
    return config.build(samples, f)


def generate_random_instance(
    f: TrueFunction, count: int, seed: int, config: InstanceConfig = InstanceConfig()
) -> Instance:
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = SplitMix64(seed)
    s = config.surface
    samples = []
    for _ in range(count):
        x = rng.uniform(s.x_min, s.x_max)
        y = rng.uniform(s.y_min, s.y_max)
        samples.append(Sample(x, y, evaluate_truth(f, (x, y))))
    return config.build(samples, f)
