"""Seeded randomness: Karhunen-Loeve Brownian paths, random point sets and
the random-point star discrepancy experiment.

All draws come from :class:`RngStream`, a Philox counter-based generator
keyed by (seed, stream id), so identical keys reproduce identical output on
every platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .discrepancy import star_discrepancy_exact
from .errors import ParameterError
from .pointsets import PointSet

__all__ = [
    "RngStream",
    "BrownianPath",
    "CovEstimate",
    "DiscrepancySummary",
    "kl_basis",
    "kl_brownian_sample",
    "kl_brownian_paths",
    "kl_truncated_variance",
    "kl_variance_gap_bound",
    "empirical_covariance",
    "random_pointset",
    "hoeffding_bound",
    "grid_star_discrepancy",
    "random_discrepancy_experiment",
]


class RngStream:
    """Philox stream keyed by ``seed`` and a stream id (int or tuple of ints)."""

    def __init__(self, seed: int, stream: int | Sequence[int] = 0):
        if seed is None:
            raise ParameterError("an explicit seed is required")
        self.seed = int(seed)
        self.stream = tuple(stream) if isinstance(stream, (tuple, list)) else (int(stream),)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.stream)
        self._gen = np.random.Generator(np.random.Philox(ss))

    def child(self, index: int) -> "RngStream":
        """Independent sub-stream, e.g. one per repetition or worker."""
        return RngStream(self.seed, self.stream + (int(index),))

    def uniform(self, size) -> np.ndarray:
        """Uniform draws in [0, 1)."""
        return self._gen.random(size)

    def normal(self, size) -> np.ndarray:
        """Standard Gaussian draws by the Box-Muller transform."""
        n = int(np.prod(size))
        m = (n + 1) // 2
        u1 = 1.0 - self._gen.random(m)  # (0, 1], keeps the log finite
        u2 = self._gen.random(m)
        r = np.sqrt(-2.0 * np.log(u1))
        z = np.empty(2 * m)
        z[0::2] = r * np.cos(2 * np.pi * u2)
        z[1::2] = r * np.sin(2 * np.pi * u2)
        return z[:n].reshape(size)


@dataclass(frozen=True)
class BrownianPath:
    grid: np.ndarray
    values: np.ndarray
    terms: int


def kl_basis(L: int, grid) -> np.ndarray:
    """(L, len(grid)) array of sqrt(2) sin((l - 1/2) pi x) / ((l - 1/2) pi)."""
    if L < 1:
        raise ParameterError("need at least one term")
    x = np.asarray(grid, dtype=float).reshape(-1)
    w = (np.arange(1, L + 1) - 0.5) * np.pi
    return math.sqrt(2.0) * np.sin(np.outer(w, x)) / w[:, None]


def kl_brownian_paths(L: int, grid, n_paths: int, rng: RngStream, chunk: int = 2048) -> np.ndarray:
    """n_paths truncated Karhunen-Loeve Brownian paths on the grid (one per row)."""
    if n_paths < 1:
        raise ParameterError("need at least one path")
    B = kl_basis(L, grid)
    out = np.empty((n_paths, B.shape[1]))
    for a in range(0, n_paths, chunk):
        b = min(n_paths, a + chunk)
        out[a:b] = rng.normal((b - a, L)) @ B
    return out


def kl_brownian_sample(L: int, grid, rng: RngStream) -> BrownianPath:
    """One path Z(x) = sum_{l <= L} xi_l sqrt(2) sin((l - 1/2) pi x) / ((l - 1/2) pi)."""
    g = np.asarray(grid, dtype=float).reshape(-1)
    return BrownianPath(g, kl_brownian_paths(L, g, 1, rng)[0], L)


def kl_truncated_variance(L: int, x: float = 1.0) -> float:
    """Variance of the L-term path at x."""
    w = (np.arange(1, L + 1) - 0.5) * np.pi
    return float(np.sum(2.0 * np.sin(w * x) ** 2 / w**2))


def kl_variance_gap_bound(L: int) -> float:
    """Upper bound 2 (1 + 1/L) / (pi^2 L) on 1 - Var Z_L(1)."""
    return 2.0 / (math.pi**2 * L) * (1.0 + 1.0 / L)


@dataclass(frozen=True)
class CovEstimate:
    value: float
    stderr: float
    n: int


def empirical_covariance(paths: np.ndarray, grid, x: float, y: float) -> CovEstimate:
    """Sample covariance of the path values at grid points x and y."""
    paths = np.asarray(paths, dtype=float)
    if paths.ndim != 2 or paths.shape[0] < 2:
        raise ParameterError("need at least two paths")
    g = np.asarray(grid, dtype=float).reshape(-1)

    def col(v):
        hit = np.flatnonzero(np.isclose(g, v, rtol=0, atol=1e-12))
        if hit.size == 0:
            raise ParameterError(f"{v} is not a grid point")
        return paths[:, hit[0]]

    a, b = col(x), col(y)
    n = a.shape[0]
    prod = (a - a.mean()) * (b - b.mean())
    value = float(prod.sum() / (n - 1))
    stderr = float(prod.std(ddof=1) / math.sqrt(n))
    return CovEstimate(value, stderr, n)


def random_pointset(s: int, N: int, rng: RngStream) -> PointSet:
    """N independent uniform points in [0,1)^s."""
    if s < 1 or N < 1:
        raise ParameterError("s and N must be positive")
    return PointSet(rng.uniform((N, s)), label=f"random(s={s},N={N},seed={rng.seed})")


def hoeffding_bound(N: int | None, t: float, ranges: Sequence[float] | None = None) -> float:
    """Hoeffding tail bound P(|sum (X_i - E X_i)| >= t).

    With ``ranges`` (b_i - a_i) this is 2 exp(-2 t^2 / sum (b_i - a_i)^2);
    without, the variables are taken mean-zero with |X_i| <= 1 and the bound
    is 2 exp(-t^2 / (2 N)).
    """
    if not t > 0:
        raise ParameterError("t must be positive")
    if ranges is not None:
        r = np.asarray(ranges, dtype=float)
        if r.size == 0 or np.any(r <= 0):
            raise ParameterError("ranges must be positive")
        return 2.0 * math.exp(-2.0 * t * t / float(np.sum(r * r)))
    if N is None or N < 1:
        raise ParameterError("N is required without ranges")
    return 2.0 * math.exp(-t * t / (2.0 * N))


def grid_star_discrepancy(P: PointSet, resolution: int) -> float:
    """Lower bound on the star discrepancy from corners on the grid {k/resolution}^s."""
    X = P.coords
    N, s = X.shape
    ticks = np.arange(1, resolution + 1) / resolution
    best = 0.0
    for corner in np.ndindex(*([resolution] * s)):
        y = ticks[list(corner)]
        vol = float(np.prod(y))
        opened = np.all(X < y, axis=1).sum() / N
        closed = np.all(X <= y, axis=1).sum() / N
        best = max(best, vol - opened, closed - vol)
    return best


@dataclass(frozen=True)
class DiscrepancySummary:
    s: int
    N: int
    reps: int
    mean: float
    max: float
    quantiles: dict
    scaled_mean: float
    scores: np.ndarray

    @property
    def hoeffding_scale(self) -> float:
        """sqrt(s/N) sqrt(log s + log N), the rate of the existence bound."""
        return math.sqrt(self.s / self.N) * math.sqrt(math.log(self.s) + math.log(self.N)) if self.s * self.N > 1 else 0.0


def random_discrepancy_experiment(
    s: int,
    N: int,
    reps: int,
    rng: RngStream,
    mode: str = "exact",
    resolution: int = 64,
) -> DiscrepancySummary:
    """Star discrepancy of ``reps`` independent random point sets.

    Repetition i draws from ``rng.child(i)``.  ``scaled_mean`` is
    mean * sqrt(N / s).  ``mode="grid"`` replaces the exact value by the
    lower bound from :func:`grid_star_discrepancy`.
    """
    if reps < 1:
        raise ParameterError("reps must be at least 1")
    if mode not in ("exact", "grid"):
        raise ParameterError(f"unknown mode {mode!r}")
    scores = np.empty(reps)
    for i in range(reps):
        P = random_pointset(s, N, rng.child(i))
        scores[i] = star_discrepancy_exact(P) if mode == "exact" else grid_star_discrepancy(P, resolution)
    q = {p: float(np.quantile(scores, p)) for p in (0.1, 0.5, 0.9)}
    mean = float(scores.mean())
    return DiscrepancySummary(s, N, reps, mean, float(scores.max()), q, mean * math.sqrt(N / s), scores)
