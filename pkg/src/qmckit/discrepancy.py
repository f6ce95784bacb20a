"""Discrepancy of point sets and related exponential-sum tools.

Boxes are anchored at the origin and half-open: B_y = [0, y_1) x ... x [0, y_s).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, NumericalConsistencyError, ParameterError
from .haar import HaarIndex, ParsevalResult, haar_coefficient, l2_via_parseval
from .pointsets import LatticeRule, PointSet

__all__ = [
    "discrepancy_function",
    "star_discrepancy_exact",
    "l2_discrepancy",
    "l2_star_discrepancy",
    "MCEstimate",
    "lp_discrepancy_mc",
    "HaarIndex",
    "ParsevalResult",
    "haar_coefficient",
    "l2_via_parseval",
    "exp_sum",
    "etk_bound",
    "lattice_etk_sum",
    "dual_lattice_enum",
    "enhanced_trig_degree",
    "minkowski_bound",
]

STAR_GRID_GUARD = 1 << 27
DUAL_ENUM_GUARD = 10**7


def _check_dim(P: PointSet, y) -> np.ndarray:
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != P.s:
        raise ParameterError(f"box corner has dimension {y.size}, points have {P.s}")
    if np.any(y < 0) or np.any(y > 1):
        raise ParameterError("box corner must lie in [0,1]^s")
    return y


def discrepancy_function(P: PointSet, y: Sequence[float]) -> float:
    """(1/N) #{n : x_n in B_y} - vol(B_y)."""
    y = _check_dim(P, y)
    inside = np.all(P.coords < y[None, :], axis=1)
    return float(inside.sum()) / P.N - float(np.prod(y))


def star_discrepancy_exact(P: PointSet, guard: int = STAR_GRID_GUARD) -> float:
    """sup_y |D_N(P, y)| by enumeration of the critical grid.

    The grid in coordinate j is the set of point coordinates together with 1.
    At every corner g the closed-box count gives the supremum of the
    positive part (approached from above) and the open-box count gives the
    supremum of the negative part (attained at g).  Counts come from a
    cumulative histogram of point ranks, so the cost is O(N s + |grid|).

    Raises
    ------
    CapacityError
        If the grid has more than ``guard`` cells.
    """
    X = P.coords
    N, s = X.shape
    grids = []
    ranks = []
    for j in range(s):
        g = np.unique(np.concatenate([X[:, j], [1.0]]))
        grids.append(g)
        ranks.append(np.searchsorted(g, X[:, j]))
    shape = tuple(len(g) for g in grids)
    if math.prod(shape) > guard:
        raise CapacityError(f"critical grid of {math.prod(shape)} cells exceeds the guard {guard}")
    # C[g0+1, g1+1, ...] = #{x : rank_i(x) <= g_i}; C[g] = #{x : rank_i(x) < g_i}
    C = np.zeros(tuple(k + 1 for k in shape), dtype=np.int32)
    np.add.at(C, tuple(r + 1 for r in ranks), 1)
    for ax in range(s):
        np.cumsum(C, axis=ax, out=C)
    # the volume factor for axes 1.. is shared by every chunk
    rest = np.ones(shape[1:], dtype=float)
    for j in range(1, s):
        sh = [1] * (s - 1)
        sh[j - 1] = shape[j]
        rest = rest * grids[j].reshape(sh)
    best = 0.0
    per_row = max(1, math.prod(shape[1:]))
    step = max(1, (1 << 22) // per_row)
    inner_closed = tuple(slice(1, None) for _ in range(s - 1))
    inner_open = tuple(slice(0, -1) for _ in range(s - 1))
    for a in range(0, shape[0], step):
        b = min(shape[0], a + step)
        vol = grids[0][a:b].reshape((-1,) + (1,) * (s - 1)) * rest
        closed = C[(slice(a + 1, b + 1),) + inner_closed]
        opened = C[(slice(a, b),) + inner_open]
        best = max(best, float(np.max(closed / N - vol)), float(np.max(vol - opened / N)))
    return best


def l2_discrepancy(P: PointSet) -> float:
    """L2 discrepancy as the worst-case error for K(x,y) = prod(1 + min(1-x_j, 1-y_j)).

    wce^2 = (4/3)^s - (2/N) sum_n prod_j (3 - x_{n,j}^2)/2
            + (1/N^2) sum_{n,n'} prod_j (1 + min(1 - x_{n,j}, 1 - x_{n',j})).

    This kernel adds up the squared L2 norms of the discrepancy function of
    every nonempty coordinate projection; for s = 1 it is the plain L2 norm.
    """
    X = P.coords
    N, s = X.shape
    t1 = (4.0 / 3.0) ** s
    t2 = 2.0 / N * float(np.sum(np.prod((3.0 - X * X) / 2.0, axis=1)))
    t3 = _pair_sum(X, lambda A, B: np.prod(2.0 - np.maximum(A, B), axis=2)) / (N * N)
    return _safe_sqrt(t1 - t2 + t3)


def l2_star_discrepancy(P: PointSet) -> float:
    """Plain L2 norm of the discrepancy function on [0,1]^s (Warnock's formula)."""
    X = P.coords
    N, s = X.shape
    t1 = 3.0**-s
    t2 = 2.0 ** (1 - s) / N * float(np.sum(np.prod(1.0 - X * X, axis=1)))
    t3 = _pair_sum(X, lambda A, B: np.prod(1.0 - np.maximum(A, B), axis=2)) / (N * N)
    return _safe_sqrt(t1 - t2 + t3)


def _pair_sum(X: np.ndarray, f, budget: int = 1 << 22) -> float:
    """sum_{n,n'} f(x_n, x_n') computed in row blocks."""
    N, s = X.shape
    step = max(1, budget // max(1, N * s))
    total = 0.0
    for a in range(0, N, step):
        total += float(np.sum(f(X[a : a + step, None, :], X[None, :, :])))
    return total


def _safe_sqrt(v: float, slack: float = 1e-12) -> float:
    if v < -slack:
        raise NumericalConsistencyError(f"negative squared norm {v}")
    return math.sqrt(max(v, 0.0))


@dataclass(frozen=True)
class MCEstimate:
    """Monte Carlo estimate of an L_p norm.

    ``value`` estimates the norm and ``stderr`` is its delta-method standard
    error; ``power`` / ``power_stderr`` refer to the p-th power that is
    actually averaged.
    """

    value: float
    stderr: float
    power: float
    power_stderr: float
    samples: int


def lp_discrepancy_mc(
    P: PointSet,
    p: float = 2.0,
    samples: int = 100_000,
    seed: int = 0,
    projections: bool = True,
) -> MCEstimate:
    """Monte Carlo estimate of the L_p discrepancy.

    With ``projections=True`` the integrand is sum_u |D_N(P_u, y_u)|^p over
    all nonempty coordinate subsets u, matching :func:`l2_discrepancy` at
    p = 2.  With ``projections=False`` only the full box is used, matching
    :func:`l2_star_discrepancy`.
    """
    if p < 1:
        raise ParameterError("p must be at least 1")
    if samples < 1:
        raise ParameterError("samples must be at least 1")
    X = P.coords
    N, s = X.shape
    faces = [u for r in range(1, s + 1) for u in itertools.combinations(range(s), r)] if projections else [tuple(range(s))]
    rng = np.random.Generator(np.random.Philox(seed))
    vals = np.empty(samples)
    step = max(1, (1 << 22) // max(1, N * s))
    for a in range(0, samples, step):
        b = min(samples, a + step)
        Y = rng.random((b - a, s))
        below = X[None, :, :] < Y[:, None, :]
        acc = np.zeros(b - a)
        for u in faces:
            cnt = np.all(below[:, :, list(u)], axis=2).sum(axis=1) / N
            acc += np.abs(cnt - np.prod(Y[:, list(u)], axis=1)) ** p
        vals[a:b] = acc
    mean = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else float("inf")
    value = mean ** (1.0 / p)
    if mean > 0 and math.isfinite(se):
        vse = se * mean ** (1.0 / p - 1.0) / p
    else:
        vse = float("inf") if not math.isfinite(se) else 0.0
    return MCEstimate(value, vse, mean, se, samples)


# ---------------------------------------------------------------------------
# exponential sums


def _integer_coords(P: PointSet):
    """(numerators, common denominator) when P is exact and small enough."""
    if P.exact is None:
        return None
    D = 1
    for row in P.exact:
        for v in row:
            D = D * v.denominator // math.gcd(D, v.denominator)
            if D > 1 << 40:
                return None
    nums = np.array([[v.numerator * (D // v.denominator) for v in row] for row in P.exact], dtype=np.int64)
    return nums.reshape(P.N, P.s), D


def _phases(P: PointSet, H: np.ndarray) -> np.ndarray:
    """h . x_n mod 1 for every row h of H, shape (len(H), N)."""
    ic = _integer_coords(P)
    if ic is not None:
        nums, D = ic
        red = np.mod(H, D).astype(np.int64)
        if D < 1 << 20:
            t = np.mod(red @ nums.T, D)
        else:
            t = np.zeros((H.shape[0], P.N), dtype=np.int64)
            for j in range(P.s):
                t = np.mod(t + np.mod(np.outer(red[:, j], nums[:, j]), D), D)
        return t / D
    t = H.astype(float) @ P.coords.T
    return t - np.floor(t)


def exp_sum(P: PointSet, h: Sequence[int]) -> complex:
    """S(P, h) = sum_n exp(2 pi i h . x_n); phases are reduced exactly for rational points."""
    H = np.asarray(h, dtype=np.int64).reshape(1, -1)
    if H.shape[1] != P.s:
        raise ParameterError("frequency dimension does not match the point set")
    t = _phases(P, H)[0]
    return complex(np.sum(np.exp(2j * np.pi * t)))


def _cube(m: int, s: int) -> np.ndarray:
    rng = np.arange(-m, m + 1, dtype=np.int64)
    return np.array(list(itertools.product(rng, repeat=s)), dtype=np.int64).reshape(-1, s)


def etk_bound(P: PointSet, m: int, constant: float = 1.0) -> float:
    """c * (1/m + sum_{0 < |h|_inf <= m} |S(P, h)| / (r(h) N)), r(h) = prod max(1, |h_j|).

    The default ``constant = 1`` gives the raw functional; no universal
    constant is implied.
    """
    if m < 1:
        raise ParameterError("cutoff m must be at least 1")
    if (2 * m + 1) ** P.s > DUAL_ENUM_GUARD:
        raise CapacityError("frequency cube too large")
    H = _cube(m, P.s)
    H = H[np.any(H != 0, axis=1)]
    r = np.prod(np.maximum(1, np.abs(H)), axis=1)
    total = 0.0
    step = max(1, (1 << 22) // max(1, P.N))
    for a in range(0, H.shape[0], step):
        S = np.abs(np.sum(np.exp(2j * np.pi * _phases(P, H[a : a + step])), axis=1))
        total += float(np.sum(S / r[a : a + step]))
    return constant * (1.0 / m + total / P.N)


def lattice_etk_sum(rule: LatticeRule, m: int | None = None) -> float:
    """R(g, N) = sum over nonzero dual h with |h|_inf <= m of 1/r(h); m defaults to N."""
    m = rule.N if m is None else m
    H = np.array(dual_lattice_enum(rule, m, norm="sup"), dtype=np.int64).reshape(-1, rule.s)
    if H.size == 0:
        return 0.0
    return float(np.sum(1.0 / np.prod(np.maximum(1, np.abs(H)), axis=1)))


# ---------------------------------------------------------------------------
# dual lattice


def dual_lattice_enum(rule: LatticeRule, bound: int, norm: str = "l1") -> list[tuple[int, ...]]:
    """Nonzero h with h . g = 0 mod N and |h| <= bound in the chosen norm.

    ``norm`` is ``"l1"`` or ``"sup"``.  Vectors come out in lexicographic order.
    """
    if norm not in ("l1", "sup"):
        raise ParameterError(f"unknown norm {norm!r}")
    if bound < 0:
        raise ParameterError("bound must be nonnegative")
    if bound == 0:
        return []
    s, N = rule.s, rule.N
    if (2 * bound + 1) ** s > DUAL_ENUM_GUARD:
        raise CapacityError(f"(2*{bound}+1)^{s} candidates exceed the guard {DUAL_ENUM_GUARD}")
    g = np.array(rule.g, dtype=np.int64)
    rest = _cube(bound, s - 1) if s > 1 else np.zeros((1, 0), dtype=np.int64)
    rest_res = rest @ g[1:] if s > 1 else np.zeros(1, dtype=np.int64)
    rest_l1 = np.abs(rest).sum(axis=1)
    rest_sup = np.abs(rest).max(axis=1) if s > 1 else np.zeros(1, dtype=np.int64)
    out = []
    for h0 in range(-bound, bound + 1):
        ok = (h0 * g[0] + rest_res) % N == 0
        if norm == "l1":
            ok &= abs(h0) + rest_l1 <= bound
        else:
            ok &= np.maximum(abs(h0), rest_sup) <= bound
        if h0 == 0:
            ok &= np.any(rest != 0, axis=1) if s > 1 else False
        for row in rest[ok]:
            out.append((h0,) + tuple(int(v) for v in row))
    return out


def minkowski_bound(s: int, N: int) -> int:
    """ceil((s! N)^(1/s)) with an integer check against rounding."""
    if s < 1 or N < 1:
        raise ParameterError("s and N must be positive")
    target = math.factorial(s) * N
    r = max(1, int(round(target ** (1.0 / s))))
    while r**s < target:
        r += 1
    while r > 1 and (r - 1) ** s >= target:
        r -= 1
    return r


def enhanced_trig_degree(rule: LatticeRule) -> int:
    """min |h|_1 over nonzero dual vectors h, found by a doubling search."""
    cap = minkowski_bound(rule.s, rule.N)
    bound = 1
    while True:
        bound = min(bound, cap)
        found = dual_lattice_enum(rule, bound, norm="l1")
        if found:
            return min(sum(abs(v) for v in h) for h in found)
        if bound >= cap:
            raise NumericalConsistencyError("no dual vector within the Minkowski bound")
        bound *= 2
