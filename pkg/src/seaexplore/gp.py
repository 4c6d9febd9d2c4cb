"""Gaussian-process regression with an isotropic squared-exponential kernel.

The posterior mean is the estimate of the resource level; the posterior
standard deviation is used as the attractiveness of probing a point.
The prior mean is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .instance import Point, Sample

LOG_2PI = math.log(2.0 * math.pi)


class GPError(RuntimeError):
    pass


class FactorizationError(GPError):
    pass


class DegenerateDataError(GPError):
    pass


@dataclass(frozen=True)
class KernelParams:
    amplitude: float = 1.0
    length_scale: float = 0.2
    noise: float = 0.0
    jitter: float = 1e-8

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError(f"amplitude must be > 0, got {self.amplitude!r}")
        if not self.length_scale > 0:
            raise ValueError(f"length_scale must be > 0, got {self.length_scale!r}")
        if not self.noise >= 0:
            raise ValueError(f"noise must be >= 0, got {self.noise!r}")
        if not self.jitter >= 0:
            raise ValueError(f"jitter must be >= 0, got {self.jitter!r}")

    @property
    def diagonal_term(self) -> float:
        return self.noise**2 + self.jitter


def default_params(samples: Sequence[Sample], length_scale: float = 0.2) -> KernelParams:
    """Amplitude from the spread of the observed values, fixed length scale."""
    z = np.array([s.z for s in samples], dtype=float)
    amp = float(np.std(z)) if len(z) > 1 else 0.0
    if not (amp > 0 and math.isfinite(amp)):
        amp = 1.0
    return KernelParams(amplitude=amp, length_scale=length_scale, noise=0.0, jitter=1e-8)


def kernel(params: KernelParams, p: Point, q: Point) -> float:
    d2 = (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2
    return params.amplitude**2 * math.exp(-d2 / (2.0 * params.length_scale**2))


def kernel_matrix(params: KernelParams, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    d2 = (a[:, None, 0] - b[None, :, 0]) ** 2 + (a[:, None, 1] - b[None, :, 1]) ** 2
    return params.amplitude**2 * np.exp(-d2 / (2.0 * params.length_scale**2))


@dataclass(frozen=True, eq=False)
class GPModel:
    params: KernelParams
    train_points: np.ndarray  # (m, 2)
    train_z: np.ndarray  # (m,)
    lower_factor: np.ndarray  # L with L @ L.T = K + (noise**2 + jitter) I
    weights: np.ndarray  # alpha = (K + (noise**2 + jitter) I)^-1 z

    @property
    def m(self) -> int:
        return len(self.train_z)

    def mean(self, points) -> np.ndarray:
        ks = kernel_matrix(self.params, points, self.train_points)
        return ks @ self.weights

    def std(self, points) -> np.ndarray:
        ks = kernel_matrix(self.params, points, self.train_points)
        v = solve_triangular(self.lower_factor, ks.T, lower=True, check_finite=False)
        var = self.params.amplitude**2 - np.einsum("ij,ij->j", v, v)
        return np.sqrt(np.maximum(var, 0.0))


def _as_arrays(samples: Sequence[Sample]) -> tuple[np.ndarray, np.ndarray]:
    if len(samples) == 0:
        raise GPError("cannot fit a Gaussian process to zero samples")
    X = np.array([[s.x, s.y] for s in samples], dtype=float)
    z = np.array([s.z for s in samples], dtype=float)
    return X, z


def _check_duplicates(X: np.ndarray, z: np.ndarray, params: KernelParams) -> None:
    if params.noise > 0:
        return
    seen: dict[tuple[float, float], float] = {}
    for (x, y), zi in zip(X.tolist(), z.tolist()):
        prev = seen.setdefault((x, y), zi)
        if prev != zi:
            raise DegenerateDataError(
                f"two samples at ({x}, {y}) disagree (z={prev} vs z={zi}) and noise is 0"
            )


def _cholesky(K: np.ndarray) -> np.ndarray:
    try:
        L = np.linalg.cholesky(K)
    except np.linalg.LinAlgError:
        raise FactorizationError(
            "Gram matrix is not positive definite; raise the jitter (or noise) parameter"
        ) from None
    if not np.all(np.diag(L) > 0):
        raise FactorizationError(
            "Cholesky factor has a non-positive pivot; raise the jitter (or noise) parameter"
        )
    return L


def _factor(X: np.ndarray, z: np.ndarray, params: KernelParams) -> tuple[np.ndarray, np.ndarray]:
    K = kernel_matrix(params, X, X)
    K[np.diag_indices_from(K)] += params.diagonal_term
    L = _cholesky(K)
    tmp = solve_triangular(L, z, lower=True, check_finite=False)
    alpha = solve_triangular(L.T, tmp, lower=False, check_finite=False)
    return L, alpha


def fit(samples: Sequence[Sample], params: KernelParams) -> GPModel:
    X, z = _as_arrays(samples)
    _check_duplicates(X, z, params)
    L, alpha = _factor(X, z, params)
    for arr in (X, z, L, alpha):
        arr.setflags(write=False)
    return GPModel(params, X, z, L, alpha)


def predict_mean(model: GPModel, p: Point) -> float:
    return float(model.mean([p])[0])


def predict_std(model: GPModel, p: Point) -> float:
    return float(model.std([p])[0])


def log_marginal_likelihood(samples: Sequence[Sample], params: KernelParams) -> float:
    X, z = _as_arrays(samples)
    L, alpha = _factor(X, z, params)
    m = len(z)
    return float(-0.5 * z @ alpha - np.sum(np.log(np.diag(L))) - 0.5 * m * LOG_2PI)


def candidate_grid(
    samples: Sequence[Sample],
    length_scales: Sequence[float] = (0.05, 0.075, 0.1, 0.15, 0.2, 0.3, 0.5),
    amplitude_factors: Sequence[float] = (0.5, 1.0, 2.0, 4.0),
    jitter: float = 1e-8,
) -> list[KernelParams]:
    """Noise-free candidates around the default amplitude."""
    base = default_params(samples).amplitude
    return [
        KernelParams(amplitude=base * f, length_scale=ell, noise=0.0, jitter=jitter)
        for ell in length_scales
        for f in amplitude_factors
    ]


def tune_params(samples: Sequence[Sample], candidates: Sequence[KernelParams]) -> KernelParams:
    """Candidate with the highest log marginal likelihood; earliest wins ties."""
    if not candidates:
        raise ValueError("no candidate kernel parameters given")
    best, best_value = None, -math.inf
    for params in candidates:
        try:
            value = log_marginal_likelihood(samples, params)
        except FactorizationError:
            continue
        if best is None or value > best_value:
            best, best_value = params, value
    if best is None:
        raise FactorizationError("every candidate failed to factorize; raise the jitter")
    return best
