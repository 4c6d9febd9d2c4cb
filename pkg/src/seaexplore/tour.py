"""Closed depot-anchored tours: construction, improvement and duration accounting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .instance import Point

DEFAULT_EXACT_THRESHOLD = 15
IMPROVEMENT_EPS = 1e-12


class TourSizeError(ValueError):
    pass


def _pt(p) -> Point:
    return (float(p[0]), float(p[1]))


def travel_length(order: Sequence[Point], depot: Point) -> float:
    """Euclidean length of depot -> order[0] -> ... -> order[-1] -> depot."""
    if not order:
        return 0.0
    total = 0.0
    prev = depot
    for p in order:
        total += math.hypot(p[0] - prev[0], p[1] - prev[1])
        prev = p
    return total + math.hypot(depot[0] - prev[0], depot[1] - prev[1])


def tour_duration(stops: Sequence[Point], depot: Point, speed: float, probe_time: float) -> float:
    if not speed > 0:
        raise ValueError(f"speed must be > 0, got {speed!r}")
    if not stops:
        return 0.0
    return travel_length(stops, depot) / speed + probe_time * len(stops)


@dataclass(frozen=True)
class Tour:
    stops: tuple[Point, ...]
    duration: float

    def __post_init__(self):
        object.__setattr__(self, "stops", tuple(_pt(p) for p in self.stops))
        if len(set(self.stops)) != len(self.stops):
            raise ValueError("tour visits the same stop twice")

    def __len__(self) -> int:
        return len(self.stops)

    @classmethod
    def empty(cls) -> "Tour":
        return cls((), 0.0)


def nearest_neighbor_order(points: Sequence[Point], depot: Point) -> list[Point]:
    """Greedy order from the depot; distance ties go to lower x, then lower y."""
    remaining = sorted(_pt(p) for p in points)
    if not remaining:
        return []
    P = np.array(remaining)
    alive = np.ones(len(P), dtype=bool)
    cur = np.asarray(depot, dtype=float)
    order = []
    for _ in range(len(P)):
        d = np.hypot(P[:, 0] - cur[0], P[:, 1] - cur[1])
        d[~alive] = np.inf
        # argmin returns the first minimum, and P is sorted by (x, y)
        k = int(np.argmin(d))
        alive[k] = False
        order.append(remaining[k])
        cur = P[k]
    return order


def two_opt_improve(order: Sequence[Point], depot: Point) -> list[Point]:
    """Best-improvement 2-opt on the closed tour with the depot held fixed."""
    order = [_pt(p) for p in order]
    n = len(order)
    if n < 2:
        return order
    # path[0] is the depot, path[n + 1] its closing copy
    path = np.array([depot, *order, depot], dtype=float)
    idx = np.arange(1, n + 1)
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    while True:
        D = np.hypot(path[:, None, 0] - path[None, :, 0], path[:, None, 1] - path[None, :, 1])
        # reversing path[i..j] swaps edges (i-1, i), (j, j+1) for (i-1, j), (i, j+1)
        delta = (
            D[np.ix_(idx - 1, idx)]
            + D[np.ix_(idx, idx + 1)]
            - D[idx - 1, idx][:, None]
            - D[idx, idx + 1][None, :]
        )
        delta[~upper] = np.inf
        best = int(np.argmin(delta))
        i, j = divmod(best, n)
        if not delta[i, j] < -IMPROVEMENT_EPS:
            break
        path[i + 1 : j + 2] = path[i + 1 : j + 2][::-1].copy()
    return [_pt(p) for p in path[1:-1]]


def held_karp_optimal(
    points: Sequence[Point], depot: Point, threshold: int = DEFAULT_EXACT_THRESHOLD
) -> list[Point]:
    """Travel-length optimal closed order by dynamic programming over subsets."""
    pts = sorted(_pt(p) for p in points)
    n = len(pts)
    if n > threshold:
        raise TourSizeError(f"{n} points exceed the exact-solver threshold of {threshold}")
    if n <= 1:
        return pts
    P = np.array(pts)
    D = np.hypot(P[:, None, 0] - P[None, :, 0], P[:, None, 1] - P[None, :, 1])
    from_depot = np.hypot(P[:, 0] - depot[0], P[:, 1] - depot[1])

    full = 1 << n
    cost = np.full((full, n), np.inf)
    parent = np.full((full, n), -1, dtype=np.int64)
    for j in range(n):
        cost[1 << j, j] = from_depot[j]
    bits = 1 << np.arange(n)
    for mask in range(1, full):
        members = (mask & bits) != 0
        if members.sum() < 2:
            continue
        for j in np.flatnonzero(members):
            prev = mask ^ (1 << j)
            cand = cost[prev] + D[:, j]
            k = int(np.argmin(cand))
            cost[mask, j] = cand[k]
            parent[mask, j] = k

    last = int(np.argmin(cost[full - 1] + from_depot))
    order = []
    mask = full - 1
    while last >= 0:
        order.append(pts[last])
        mask, last = mask ^ (1 << last), int(parent[mask, last])
    return order[::-1]


def best_tour(
    points: Sequence[Point],
    depot: Point,
    speed: float,
    probe_time: float,
    budget: float,
    exact_threshold: int = DEFAULT_EXACT_THRESHOLD,
) -> tuple[Tour, bool]:
    """Heuristic tour if it fits the budget, otherwise the exact optimum when small enough.

    Feasibility is strict: ``duration < budget``.
    """
    if not points:
        return Tour.empty(), budget > 0
    order = two_opt_improve(nearest_neighbor_order(points, depot), depot)
    duration = tour_duration(order, depot, speed, probe_time)
    if duration < budget:
        return Tour(tuple(order), duration), True
    if len(order) > exact_threshold:
        return Tour(tuple(order), duration), False
    exact = held_karp_optimal(order, depot, exact_threshold)
    exact_duration = tour_duration(exact, depot, speed, probe_time)
    if exact_duration < duration:
        order, duration = exact, exact_duration
    return Tour(tuple(order), duration), duration < budget
