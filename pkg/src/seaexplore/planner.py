"""Greedy orienteering driven by GP uncertainty, and the regular-grid baseline."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import gp
from .gp import KernelParams
from .instance import Instance, Point, Sample, Surface, interior_grid
from .tour import DEFAULT_EXACT_THRESHOLD, Tour, best_tour

# grid baseline gives up beyond this side length even if probes are free
MAX_BASELINE_SIDE = 200


@dataclass(frozen=True)
class PlannerConfig:
    grid_k: int = 20
    grid_l: int = 20
    exclusion_radius: float = 1e-6
    kernel: KernelParams | None = None  # None: derive from the initial samples
    exact_threshold: int = DEFAULT_EXACT_THRESHOLD
    tune: bool = False
    # (field, value) pairs applied on top of a derived or tuned kernel
    kernel_overrides: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        if self.grid_k < 1 or self.grid_l < 1:
            raise ValueError("grid_k and grid_l must be >= 1")
        if not self.exclusion_radius >= 0:
            raise ValueError("exclusion_radius must be >= 0")


def resolve_kernel(samples: Sequence[Sample], config: PlannerConfig) -> KernelParams:
    """Kernel used for the whole run: explicit, tuned, or the data-driven default."""
    if config.kernel is not None:
        return config.kernel
    if config.tune:
        params = gp.tune_params(samples, gp.candidate_grid(samples))
    else:
        params = gp.default_params(samples)
    return replace(params, **dict(config.kernel_overrides))


def with_resolved_kernel(samples: Sequence[Sample], config: PlannerConfig) -> PlannerConfig:
    return replace(config, kernel=resolve_kernel(samples, config), tune=False, kernel_overrides=())


@dataclass(frozen=True)
class AssessmentGrid:
    resolution_k: int
    resolution_l: int
    entries: tuple[tuple[float, float, float], ...]  # (sigma, x, y), ascending

    def __len__(self) -> int:
        return len(self.entries)


def assessment_nodes(surface: Surface, k: int, l: int) -> np.ndarray:
    xs = [surface.x_min + surface.width * i / k for i in range(k + 1)]
    ys = [surface.y_min + surface.height * j / l for j in range(l + 1)]
    return np.array([(x, y) for x in xs for y in ys])


def assess(data: Sequence[Sample], surface: Surface, config: PlannerConfig) -> AssessmentGrid:
    """Posterior std on the assessment grid, most attractive node last."""
    model = gp.fit(data, resolve_kernel(data, config))
    nodes = assessment_nodes(surface, config.grid_k, config.grid_l)
    sigma = model.std(nodes)
    entries = sorted(zip(sigma.tolist(), nodes[:, 0].tolist(), nodes[:, 1].tolist()))
    return AssessmentGrid(config.grid_k, config.grid_l, tuple(entries))


def _too_close(p: Point, others: np.ndarray, radius: float) -> bool:
    if len(others) == 0:
        return False
    d = np.hypot(others[:, 0] - p[0], others[:, 1] - p[1])
    return bool(np.any(d < radius)) or bool(np.any(d == 0.0))


def orienteering_with_data(inst: Instance, config: PlannerConfig) -> tuple[Tour, list[Sample]]:
    """Run the greedy planner; also return the working data with simulated probes."""
    if not inst.initial_samples:
        raise ValueError("orienteering needs at least one initial sample")
    config = with_resolved_kernel(inst.initial_samples, config)
    data = list(inst.initial_samples)
    tour = Tour.empty()
    max_iterations = (config.grid_k + 1) * (config.grid_l + 1)

    for _ in range(max_iterations):
        grid = assess(data, inst.surface, config)
        taken = np.array([s.point for s in data])
        candidate = None
        for sigma, x, y in reversed(grid.entries):
            if not _too_close((x, y), taken, config.exclusion_radius):
                candidate = (x, y)
                break
        if candidate is None:
            break
        trial, feasible = best_tour(
            [*tour.stops, candidate],
            inst.depot,
            inst.speed_s,
            inst.probe_time_t,
            inst.budget_T,
            config.exact_threshold,
        )
        if not feasible:
            break
        tour = trial
        # pretend the probe returns the current posterior mean
        model = gp.fit(data, config.kernel)
        data.append(Sample(candidate[0], candidate[1], gp.predict_mean(model, candidate)))
    return tour, data


def plan_orienteering(inst: Instance, config: PlannerConfig = PlannerConfig()) -> Tour:
    return orienteering_with_data(inst, config)[0]


def plan_grid_baseline(inst: Instance, config: PlannerConfig = PlannerConfig()) -> Tour:
    """Regular interior g x g grid, minus already-sampled spots, that fits the budget.

    g grows from 1 until the tour no longer fits; the feasible plan with the
    most probes is kept (the larger g on ties).
    """
    taken = np.array(inst.points) if inst.initial_samples else np.empty((0, 2))
    best = Tour.empty()
    for side in range(1, MAX_BASELINE_SIDE + 1):
        nodes = [p for p in interior_grid(inst.surface, side) if not _too_close(p, taken, config.exclusion_radius)]
        if inst.probe_time_t * len(nodes) >= inst.budget_T:
            break
        tour, feasible = best_tour(
            nodes,
            inst.depot,
            inst.speed_s,
            inst.probe_time_t,
            inst.budget_T,
            config.exact_threshold,
        )
        if not feasible:
            break
        # a side whose nodes are mostly already sampled must not displace a fuller plan
        if len(tour) >= len(best):
            best = tour
    return best


PLANNERS = {
    "orienteering": plan_orienteering,
    "grid": plan_grid_baseline,
}
