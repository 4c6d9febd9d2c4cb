"""Command-line entry point: ``seaexplore {generate,plan,run,compare,heatmap}``.

Exit status is 0 on success, 1 on usage errors and 2 on runtime errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

from . import gp
from .benchmarks import NAMES, benchmark_function, benchmark_instance
from .gp import GPError
from .harness import (
    HEATMAP_FIELDS,
    BenchmarkModeError,
    compare,
    emit_heatmap,
    format_points,
    format_run,
    format_table,
    format_tour,
    run_main,
)
from .instance import (
    InstanceConfig,
    InstanceError,
    Sample,
    generate_random_instance,
    load_instance,
    serialize_instance,
)
from .planner import PLANNERS, PlannerConfig, resolve_kernel
from .tour import TourSizeError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def write_atomic(path: str | None, text: str) -> None:
    """Write to ``path`` through a temp file and rename; ``None`` or ``-`` means stdout."""
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("Gaussian process")
    g.add_argument("--amplitude", type=float, help="prior signal std (default: std of the initial z values)")
    g.add_argument("--length-scale", type=float, help="kernel length scale (default: 0.2)")
    g.add_argument("--noise", type=float, help="observation noise std (default: 0)")
    g.add_argument("--jitter", type=float, help="diagonal regularizer (default: 1e-8)")
    g.add_argument("--tune", action="store_true", help="pick kernel parameters by log marginal likelihood on a grid")


def _add_planner_flags(p: argparse.ArgumentParser, with_choice: bool = True) -> None:
    if with_choice:
        p.add_argument("--planner", choices=sorted(PLANNERS), default="orienteering")
    p.add_argument("--grid-k", type=_positive_int, default=20, help="assessment grid divisions along x (default: 20)")
    p.add_argument("--grid-l", type=_positive_int, default=20, help="assessment grid divisions along y (default: 20)")
    _add_model_flags(p)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="seaexplore", description="Data-driven probe planning on a continuous surface.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write a benchmark instance file")
    p.add_argument("--function", choices=NAMES, required=True, help="ground-truth surface")
    p.add_argument("--layout", choices=("grid", "random"), default="grid")
    p.add_argument("--points", type=_positive_int, default=16, help="initial sample count (a square for grid layout)")
    p.add_argument("--seed", type=int, help="random-layout seed (default: derived from function and count)")
    p.add_argument("--mesh-step", type=float, default=0.01)
    p.add_argument("--out", help="output path (default: stdout)")

    p = sub.add_parser("plan", help="plan a tour from the initial data only")
    p.add_argument("--instance", required=True)
    _add_planner_flags(p)
    p.add_argument("--out", help="tour dump path (default: stdout)")

    p = sub.add_parser("run", help="plan, reveal the truth at the stops, refit and score")
    p.add_argument("--instance", required=True)
    _add_planner_flags(p)
    p.add_argument("--mesh-step", type=float, help="override the instance's evaluation mesh step")
    p.add_argument("--residuals", help="also write the final x,y,|v-w| residual stream here")
    p.add_argument("--out", help="run summary path (default: stdout)")

    p = sub.add_parser("compare", help="grid baseline vs orienteering over many instances")
    p.add_argument("--instances", nargs="+", required=True)
    _add_planner_flags(p, with_choice=False)
    p.add_argument("--mesh-step", type=float, help="override every instance's evaluation mesh step")
    p.add_argument("--jobs", type=_positive_int, default=1, help="instances evaluated in parallel (default: 1)")
    p.add_argument("--out", help="results table path (default: stdout)")

    p = sub.add_parser("heatmap", help="x,y,value rows of truth, posterior mean, std or abs error")
    p.add_argument("--instance", required=True)
    p.add_argument("--field", choices=HEATMAP_FIELDS, required=True)
    p.add_argument("--planner", choices=sorted(PLANNERS), help="fit after probing this planner's tour (default: initial data only)")
    p.add_argument("--grid-k", type=_positive_int, default=20)
    p.add_argument("--grid-l", type=_positive_int, default=20)
    _add_model_flags(p)
    p.add_argument("--mesh-step", type=float, help="default: the instance's mesh step")
    p.add_argument("--out", help="output path (default: stdout)")
    return parser


def _planner_config(args) -> PlannerConfig:
    overrides = tuple(
        (name, value)
        for name, value in (
            ("amplitude", args.amplitude),
            ("length_scale", args.length_scale),
            ("noise", args.noise),
            ("jitter", args.jitter),
        )
        if value is not None
    )
    return PlannerConfig(grid_k=args.grid_k, grid_l=args.grid_l, tune=args.tune, kernel_overrides=overrides)


def _load(path: str, mesh_step: float | None = None):
    inst = load_instance(path)
    if mesh_step is not None:
        inst = replace(inst, mesh_step=mesh_step)
    return inst


def _cmd_generate(args) -> None:
    config = InstanceConfig(mesh_step=args.mesh_step)
    if args.layout == "random" and args.seed is not None:
        inst = generate_random_instance(benchmark_function(args.function), args.points, args.seed, config)
    else:
        inst = benchmark_instance(args.function, args.points, args.layout, config)
    write_atomic(args.out, serialize_instance(inst))


def _cmd_plan(args) -> None:
    inst = _load(args.instance).without_truth()
    if not inst.initial_samples and args.planner == "orienteering":
        raise ValueError("orienteering needs at least one initial sample in the instance")
    config = _planner_config(args)
    tour = PLANNERS[args.planner](inst, config)
    write_atomic(args.out, format_tour(tour))


def _cmd_run(args) -> None:
    inst = _load(args.instance, args.mesh_step)
    result = run_main(inst, args.planner, _planner_config(args))
    if args.residuals:
        write_atomic(args.residuals, format_points(result.residuals))
    write_atomic(args.out, format_run(result, args.planner))


def _cmd_compare(args) -> None:
    named = [(Path(p).stem, _load(p, args.mesh_step)) for p in args.instances]
    table = compare(named, _planner_config(args), jobs=args.jobs)
    for row in table.rows:
        if row.error:
            print(f"seaexplore: {row.instance_name}: {row.error}", file=sys.stderr)
    write_atomic(args.out, format_table(table))


def _cmd_heatmap(args) -> None:
    inst = _load(args.instance)
    step = args.mesh_step if args.mesh_step is not None else inst.mesh_step
    model = None
    if args.field != "truth":
        if not inst.initial_samples:
            raise ValueError("the instance has no samples to fit a model on")
        config = _planner_config(args)
        kernel = resolve_kernel(inst.initial_samples, config)
        data = list(inst.initial_samples)
        if args.planner:
            if inst.truth is None:
                raise BenchmarkModeError("benchmark mode requires ground truth")
            tour = PLANNERS[args.planner](inst.without_truth(), replace(config, kernel=kernel, tune=False))
            data += [Sample(x, y, inst.truth(x, y)) for x, y in tour.stops]
        model = gp.fit(data, kernel)
    write_atomic(args.out, emit_heatmap(args.field, inst.surface, step, model=model, truth=inst.truth))


COMMANDS = {
    "generate": _cmd_generate,
    "plan": _cmd_plan,
    "run": _cmd_run,
    "compare": _cmd_compare,
    "heatmap": _cmd_heatmap,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"{exc} (see --help)", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"seaexplore: file not found: {exc.filename}", file=sys.stderr)
        return 2
    except (InstanceError, GPError, BenchmarkModeError, TourSizeError, ValueError, OSError) as exc:
        print(f"seaexplore: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
