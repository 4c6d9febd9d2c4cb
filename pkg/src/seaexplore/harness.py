"""Benchmark pipeline: plan, reveal the truth at the stops, refit, score.

The error of an estimate is the sum of absolute residuals over the
evaluation mesh. Planning only ever sees an instance with its ground truth
stripped.
"""

from __future__ import annotations

import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gp
from .gp import GPModel
from .instance import EvalMesh, Instance, Sample, Surface, TrueFunction, build_mesh, evaluate_truth
from .planner import PLANNERS, PlannerConfig, with_resolved_kernel
from .tour import Tour


class BenchmarkModeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RunResult:
    tour: Tour
    initial_delta: float
    final_delta: float
    residuals: np.ndarray  # (K, 3): x, y, |v - w|
    wall_time: float


def residuals(model: GPModel, truth: TrueFunction, mesh: EvalMesh) -> np.ndarray:
    err = np.abs(truth.evaluate_many(mesh.points) - model.mean(mesh.points))
    return np.column_stack([mesh.points, err])


def error_delta(model: GPModel, truth: TrueFunction, mesh: EvalMesh) -> float:
    # fsum is exactly rounded, so the result does not depend on reduction order
    return math.fsum(residuals(model, truth, mesh)[:, 2].tolist())


def run_main(inst: Instance, planner: str = "orienteering", config: PlannerConfig = PlannerConfig()) -> RunResult:
    if inst.truth is None:
        raise BenchmarkModeError("benchmark mode requires ground truth")
    if planner not in PLANNERS:
        raise ValueError(f"unknown planner {planner!r}; choose from {sorted(PLANNERS)}")
    start = time.perf_counter()
    config = with_resolved_kernel(inst.initial_samples, config)

    tour = PLANNERS[planner](inst.without_truth(), config)

    truth = inst.truth
    revealed = [Sample(x, y, evaluate_truth(truth, (x, y))) for x, y in tour.stops]
    mesh = build_mesh(inst.surface, inst.mesh_step)
    before = gp.fit(inst.initial_samples, config.kernel)
    after = gp.fit([*inst.initial_samples, *revealed], config.kernel)
    res = residuals(after, truth, mesh)
    return RunResult(
        tour=tour,
        initial_delta=error_delta(before, truth, mesh),
        final_delta=math.fsum(res[:, 2].tolist()),
        residuals=res,
        wall_time=time.perf_counter() - start,
    )


@dataclass(frozen=True)
class ComparisonRow:
    instance_name: str
    initial_delta: float
    grid_delta: float
    orienteering_delta: float
    error: str | None = None


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[ComparisonRow, ...]

    @property
    def wins(self) -> tuple[int, int]:
        grid = sum(1 for r in self.rows if r.error is None and r.grid_delta < r.orienteering_delta)
        orient = sum(1 for r in self.rows if r.error is None and r.orienteering_delta < r.grid_delta)
        return grid, orient


def _compare_one(args: tuple[str, Instance, PlannerConfig]) -> ComparisonRow:
    name, inst, config = args
    try:
        grid = run_main(inst, "grid", config)
        orient = run_main(inst, "orienteering", config)
    except Exception as exc:  # recorded in the table, batch goes on
        nan = float("nan")
        return ComparisonRow(name, nan, nan, nan, error=f"{type(exc).__name__}: {exc}")
    return ComparisonRow(name, orient.initial_delta, grid.final_delta, orient.final_delta)


def compare(
    instances: Sequence[tuple[str, Instance]],
    config: PlannerConfig = PlannerConfig(),
    jobs: int = 1,
) -> ComparisonTable:
    work = [(name, inst, config) for name, inst in instances]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_compare_one, work))
    else:
        rows = [_compare_one(w) for w in work]
    return ComparisonTable(tuple(rows))


# -- CSV renderings -------------------------------------------------------------

def _num(v: float) -> str:
    return repr(float(v))


def format_table(table: ComparisonTable) -> str:
    out = io.StringIO()
    out.write("instance,initial,grid,orienteering\n")
    for r in table.rows:
        out.write(f"{r.instance_name},{_num(r.initial_delta)},{_num(r.grid_delta)},{_num(r.orienteering_delta)}\n")
    grid, orient = table.wins
    out.write(f"wins,{grid},{orient}\n")
    return out.getvalue()


def format_tour(tour: Tour) -> str:
    lines = [f"duration,{_num(tour.duration)}", "order,x,y"]
    lines += [f"{i},{_num(x)},{_num(y)}" for i, (x, y) in enumerate(tour.stops, start=1)]
    return "\n".join(lines) + "\n"


def format_run(result: RunResult, planner: str) -> str:
    lines = [
        f"planner,{planner}",
        f"initial_delta,{_num(result.initial_delta)}",
        f"final_delta,{_num(result.final_delta)}",
        f"stops,{len(result.tour)}",
    ]
    return "\n".join(lines) + "\n" + format_tour(result.tour)


def format_points(rows: np.ndarray) -> str:
    out = io.StringIO()
    out.write("x,y,value\n")
    for x, y, v in rows.tolist():
        out.write(f"{_num(x)},{_num(y)},{_num(v)}\n")
    return out.getvalue()


HEATMAP_FIELDS = ("truth", "mean", "std", "abs_error")


def emit_heatmap(
    field: str,
    surface: Surface,
    step: float,
    model: GPModel | None = None,
    truth: TrueFunction | None = None,
) -> str:
    """``x,y,value`` rows over the mesh for one of ``HEATMAP_FIELDS``."""
    if not step > 0:
        raise ValueError(f"step must be positive, got {step!r}")
    if field not in HEATMAP_FIELDS:
        raise ValueError(f"unknown field {field!r}; choose from {HEATMAP_FIELDS}")
    if field in ("truth", "abs_error") and truth is None:
        raise BenchmarkModeError(f"field '{field}' requires ground truth")
    if field in ("mean", "std", "abs_error") and model is None:
        raise ValueError(f"field '{field}' requires a fitted model")
    mesh = build_mesh(surface, step)
    if field == "truth":
        values = np.array([evaluate_truth(truth, p) for p in mesh.points.tolist()])
    elif field == "mean":
        values = model.mean(mesh.points)
    elif field == "std":
        values = model.std(mesh.points)
    else:
        values = residuals(model, truth, mesh)[:, 2]
    return format_points(np.column_stack([mesh.points, values]))
