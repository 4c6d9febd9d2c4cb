"""The shipped ground-truth family g1..g10.

``gk`` is a mixture of ``k`` isotropic bumps. Spreads run from 0.2 down to a
per-function minimum that shrinks from 0.15 (g1) to 0.03 (g10), so later
functions have more and sharper local maxima. Centres and weights come from
the SplitMix generator seeded with ``BASE_SEED + k``.
"""

from __future__ import annotations

from .instance import Bump, Instance, InstanceConfig, TrueFunction, generate_grid_instance, generate_random_instance
from .rng import SplitMix64

BASE_SEED = 20190400
NAMES = tuple(f"g{k}" for k in range(1, 11))
# (label, initial point count, layout)
SETTINGS = (
    ("16grid", 16, "grid"),
    ("49grid", 49, "grid"),
    ("100grid", 100, "grid"),
    ("16random", 16, "random"),
    ("49random", 49, "random"),
    ("100random", 100, "random"),
)
RANDOM_SEED_OFFSET = 1000


def _spreads(k: int) -> list[float]:
    smallest = 0.15 - (k - 1) * (0.12 / 9)
    if k == 1:
        return [smallest]
    return [0.2 + (smallest - 0.2) * j / (k - 1) for j in range(k)]


def benchmark_function(name: str) -> TrueFunction:
    if name not in NAMES:
        raise KeyError(f"unknown benchmark function {name!r}; choose from {', '.join(NAMES)}")
    k = int(name[1:])
    rng = SplitMix64(BASE_SEED + k)
    bumps = []
    for spread in _spreads(k):
        cx = rng.uniform(0.05, 0.95)
        cy = rng.uniform(0.05, 0.95)
        weight = rng.uniform(20.0, 100.0)
        bumps.append(Bump(weight, cx, cy, spread))
    return TrueFunction(tuple(bumps))


def benchmark_instance(name: str, count: int, layout: str, config: InstanceConfig = InstanceConfig()) -> Instance:
    f = benchmark_function(name)
    if layout == "grid":
        side = round(count**0.5)
        if side * side != count:
            raise ValueError(f"grid layout needs a perfect square point count, got {count}")
        return generate_grid_instance(f, side, config)
    if layout == "random":
        seed = BASE_SEED + RANDOM_SEED_OFFSET * count + int(name[1:])
        return generate_random_instance(f, count, seed, config)
    raise ValueError(f"unknown layout {layout!r}; use 'grid' or 'random'")
