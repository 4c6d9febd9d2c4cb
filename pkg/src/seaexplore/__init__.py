"""Plan probing trips over a continuous surface with Gaussian-process uncertainty."""

from .gp import GPModel, KernelParams, fit, log_marginal_likelihood, predict_mean, predict_std, tune_params
from .harness import ComparisonTable, RunResult, compare, error_delta, run_main
from .instance import (
    Instance,
    Sample,
    Surface,
    TrueFunction,
    build_mesh,
    evaluate_truth,
    load_instance,
    parse_instance,
    serialize_instance,
)
from .planner import PlannerConfig, assess, plan_grid_baseline, plan_orienteering
from .tour import Tour, best_tour, tour_duration

__all__ = [
    "ComparisonTable",
    "GPModel",
    "Instance",
    "KernelParams",
    "PlannerConfig",
    "RunResult",
    "Sample",
    "Surface",
    "Tour",
    "TrueFunction",
    "assess",
    "best_tour",
    "build_mesh",
    "compare",
    "error_delta",
    "evaluate_truth",
    "fit",
    "load_instance",
    "log_marginal_likelihood",
    "parse_instance",
    "plan_grid_baseline",
    "plan_orienteering",
    "predict_mean",
    "predict_std",
    "run_main",
    "serialize_instance",
    "tour_duration",
    "tune_params",
]
