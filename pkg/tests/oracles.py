"""Independent reference computations used by the tests.

Nothing here calls into the code paths being checked: the GP oracle inverts
the covariance matrix explicitly, and the TSP oracle enumerates permutations.
"""

import itertools
import math

import numpy as np


def se_kernel(amplitude, length_scale, p, q):
    d2 = (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2
    return amplitude**2 * math.exp(-d2 / (2.0 * length_scale**2))


def dense_gp(points, z, query, amplitude, length_scale, diag):
    """Mean, std at ``query`` and log marginal likelihood via an explicit inverse."""
    m = len(points)
    K = np.array([[se_kernel(amplitude, length_scale, p, q) for q in points] for p in points])
    K += diag * np.eye(m)
    Kinv = np.linalg.inv(K)
    k = np.array([se_kernel(amplitude, length_scale, query, p) for p in points])
    z = np.asarray(z, dtype=float)
    mean = k @ Kinv @ z
    var = amplitude**2 - k @ Kinv @ k
    sign, logdet = np.linalg.slogdet(K)
    assert sign > 0
    lml = -0.5 * z @ Kinv @ z - 0.5 * logdet - 0.5 * m * math.log(2 * math.pi)
    return float(mean), math.sqrt(max(var, 0.0)), float(lml)


def mvn_logpdf_3(z, K):
    """Zero-mean normal log density for a 3x3 covariance, via cofactors."""
    (a, b, c), (d, e, f), (g, h, i) = K
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    adj = [
        [e * i - f * h, c * h - b * i, b * f - c * e],
        [f * g - d * i, a * i - c * g, c * d - a * f],
        [d * h - e * g, b * g - a * h, a * e - b * d],
    ]
    quad = sum(z[r] * adj[r][s] * z[s] for r in range(3) for s in range(3)) / det
    return -0.5 * quad - 0.5 * math.log(det) - 1.5 * math.log(2 * math.pi)


def closed_length(order, depot):
    pts = [depot, *order, depot]
    return sum(math.dist(pts[i], pts[i + 1]) for i in range(len(pts) - 1))


def brute_force_length(points, depot):
    """Optimal closed-tour length by enumerating every permutation (vectorised)."""
    n = len(points)
    if n == 0:
        return 0.0
    P = np.array(points, dtype=float)
    perms = np.array(list(itertools.permutations(range(n))))
    D = np.hypot(P[:, None, 0] - P[None, :, 0], P[:, None, 1] - P[None, :, 1])
    home = np.hypot(P[:, 0] - depot[0], P[:, 1] - depot[1])
    total = home[perms[:, 0]] + home[perms[:, -1]]
    for s in range(n - 1):
        total = total + D[perms[:, s], perms[:, s + 1]]
    return float(total.min())
