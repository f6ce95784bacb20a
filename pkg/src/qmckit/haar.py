"""Haar coefficients of the discrepancy function and Parseval's L2 value.

The one-dimensional Haar function h_{j,m} (j >= 0) is +1 on the left half
of I_{j,m} = [m 2^-j, (m+1) 2^-j), -1 on the right half and 0 elsewhere;
h_{-1,0} is the indicator of [0,1).  Multivariate functions are tensor
products, and ||h_{j,m}||_2^2 = 2^-(max(j_1,0) + ... + max(j_s,0)).

The coefficient mu_{j,m} = <D_N(P, .), h_{j,m}> splits into a counting part
(1/N) sum_n prod_i F(x_{n,i}) with F(z) = int_z^1 h(y) dy and a volume part
prod_i int_0^1 y h(y) dy.  Per coordinate the volume integral is 1/2 for
j = -1 and -4^-(j+1) for j >= 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


from .errors import CapacityError, ParameterError, RepresentationError
from .pointsets import PointSet

__all__ = [
    "HaarIndex",
    "ParsevalResult",
    "haar_function",
    "haar_norm_sq",
    "counting_part_1d",
    "volume_part_1d",
    "volume_coefficient",
    "counting_coefficient",
    "haar_coefficient",
    "haar_level",
    "l2_via_parseval",
]

MAX_LEVEL_VECTORS = 1 << 20


@dataclass(frozen=True)
class HaarIndex:
    """Level vector j (entries >= -1) and position vector m."""

    j: tuple[int, ...]
    m: tuple[int, ...]

    def __post_init__(self):
        j = tuple(int(v) for v in self.j)
        m = tuple(int(v) for v in self.m)
        if len(j) != len(m) or not j:
            raise ParameterError("level and position vectors must have equal positive length")
        for ji, mi in zip(j, m):
            if ji < -1:
                raise ParameterError(f"level {ji} < -1")
            top = 1 if ji == -1 else 1 << ji
            if not 0 <= mi < top:
                raise ParameterError(f"position {mi} outside 0..{top - 1} at level {ji}")
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "m", m)

    @property
    def s(self) -> int:
        return len(self.j)


def haar_norm_sq(j: Sequence[int]) -> Fraction:
    return Fraction(1, 2 ** sum(max(v, 0) for v in j))


def haar_function(idx: HaarIndex, y: Sequence[float]) -> int:
    """Value of h_{j,m} at y (one of -1, 0, 1)."""
    val = 1
    for ji, mi, yi in zip(idx.j, idx.m, y):
        if not 0 <= yi < 1:
            return 0
        if ji == -1:
            continue
        t = yi * (1 << ji) - mi
        if not 0 <= t < 1:
            return 0
        val *= 1 if t < 0.5 else -1
    return val


def counting_part_1d(z, j: int, m: int):
    """int_z^1 h_{j,m}(y) dy; exact for Fraction input."""
    if j == -1:
        return 1 - z
    a = Fraction(m, 1 << j) if isinstance(z, Fraction) else m / (1 << j)
    d = Fraction(1, 1 << (j + 1)) if isinstance(z, Fraction) else 1.0 / (1 << (j + 1))
    if z <= a or z >= a + 2 * d:
        return 0 * z
    if z < a + d:
        return a - z
    return z - a - 2 * d


def volume_part_1d(j: int) -> Fraction:
    """int_0^1 y h_{j,m}(y) dy, independent of m."""
    if j == -1:
        return Fraction(1, 2)
    return -Fraction(1, 4 ** (j + 1))


def volume_coefficient(j: Sequence[int]) -> Fraction:
    """<y_1 ... y_s, h_{j,m}>; magnitude 2^(-2|j| - 2s) when every j_i >= 0."""
    out = Fraction(1)
    for ji in j:
        out *= volume_part_1d(ji)
    return out


def _exact_rows(P: PointSet, exact: bool | None):
    if exact is None:
        exact = P.exact is not None and P.dyadic_exponent() is not None
    if not exact:
        return None
    if P.exact is None or P.dyadic_exponent() is None:
        raise RepresentationError("exact Haar coefficients need dyadic rational points")
    return P.exact


def counting_coefficient(P: PointSet, idx: HaarIndex, exact: bool | None = None):
    """(1/N) sum_n <1_{B_y}(x_n), h_{j,m}(y)>."""
    if idx.s != P.s:
        raise ParameterError("Haar index dimension does not match the point set")
    rows = _exact_rows(P, exact)
    if rows is None:
        total = 0.0
        for x in P.coords.tolist():
            prod = 1.0
            for zi, ji, mi in zip(x, idx.j, idx.m):
                prod *= counting_part_1d(float(zi), ji, mi)
                if prod == 0.0:
                    break
            total += prod
        return total / P.N
    total = Fraction(0)
    for x in rows:
        prod = Fraction(1)
        for zi, ji, mi in zip(x, idx.j, idx.m):
            prod *= counting_part_1d(zi, ji, mi)
            if not prod:
                break
        total += prod
    return total / P.N


def haar_coefficient(P: PointSet, idx: HaarIndex, exact: bool | None = None, part: str = "both"):
    """Haar coefficient mu_{j,m} of the discrepancy function of P.

    Parameters
    ----------
    P : PointSet
    idx : HaarIndex
    exact : bool, optional
        Force exact rational arithmetic (requires dyadic points) or floats.
        By default exact whenever P is dyadic.
    part : {"both", "counting", "volume"}
        Return only one side of counting minus volume.
    """
    if part == "volume":
        v = volume_coefficient(idx.j)
        return v if _exact_rows(P, exact) is not None else float(v)
    c = counting_coefficient(P, idx, exact)
    if part == "counting":
        return c
    if part != "both":
        raise ParameterError(f"unknown part {part!r}")
    v = volume_coefficient(idx.j)
    return c - v if isinstance(c, Fraction) else c - float(v)


def haar_level(P: PointSet, j: Sequence[int], exact: bool | None = None) -> dict[tuple[int, ...], Fraction | float]:
    """All coefficients mu_{j,m} of one level vector j, keyed by position m.

    A point contributes to the counting part only at the position whose
    dyadic box contains it, so one pass over the points suffices.
    """
    j = tuple(int(v) for v in j)
    if len(j) != P.s:
        raise ParameterError("level vector dimension does not match the point set")
    if any(v < -1 for v in j):
        raise ParameterError("levels must be >= -1")
    rows = _exact_rows(P, exact)
    is_exact = rows is not None
    if rows is None:
        rows = [tuple(r) for r in P.coords.tolist()]
    v = volume_coefficient(j)
    if not is_exact:
        v = float(v)
    counts: dict[tuple[int, ...], Fraction | float] = {}
    for x in rows:
        key = tuple(0 if ji == -1 else int(zi * (1 << ji)) for zi, ji in zip(x, j))
        prod = Fraction(1) if is_exact else 1.0
        for zi, ji, mi in zip(x, j, key):
            prod *= counting_part_1d(zi, ji, mi)
        if prod:
            counts[key] = counts.get(key, 0) + prod
    N = P.N
    spans = [range(1) if ji == -1 else range(1 << ji) for ji in j]
    return {m: counts.get(m, 0) / N - v for m in itertools.product(*spans)}


@dataclass(frozen=True)
class ParsevalResult:
    """Squared L2 norm from Haar coefficients.

    ``value`` = ``partial`` + ``tail``.  ``partial`` sums every level vector
    with all entries <= ``max_level``; ``tail`` is the closed-form sum of
    the remaining, volume-only coefficients.  ``tail_exact`` says whether
    those coefficients really have no counting part.
    """

    value: Fraction | float
    partial: Fraction | float
    tail: Fraction | float
    max_level: int
    tail_exact: bool
    projections: bool


def _level_sum(rows, j: tuple[int, ...], exact: bool):
    """sum_m mu_{j,m}^2 / ||h_{j,m}||^2 for one level vector j."""
    N = len(rows)
    v = volume_coefficient(j)
    if not exact:
        v = float(v)
    boxes: dict[tuple[int, ...], object] = {}
    for x in rows:
        key = []
        prod = Fraction(1) if exact else 1.0
        for zi, ji in zip(x, j):
            mi = 0 if ji == -1 else int(zi * (1 << ji))
            key.append(mi)
            prod *= counting_part_1d(zi, ji, mi)
        if prod:
            k = tuple(key)
            boxes[k] = boxes.get(k, 0) + prod
    npos = 1 << sum(max(ji, 0) for ji in j)
    acc = npos * v * v
    for c in boxes.values():
        c = c / N
        acc += (c - v) ** 2 - v * v
    return acc * npos


def _one_face(rows, s: int, L: int, exact: bool):
    levels = range(-1, L + 1)
    partial = Fraction(0) if exact else 0.0
    for j in itertools.product(levels, repeat=s):
        partial += _level_sum(rows, j, exact)
    # full volume-only sum is 3^-s; subtract the part already covered
    low = Fraction(1, 4) + (1 - Fraction(1, 4 ** (L + 1))) / 12
    tail = Fraction(1, 3**s) - low**s
    return partial, (tail if exact else float(tail))


def l2_via_parseval(
    P: PointSet,
    max_level: int | None = None,
    projections: bool = True,
    exact: bool | None = None,
) -> ParsevalResult:
    """Squared L2 discrepancy through Parseval's identity in the Haar basis.

    With ``projections=True`` the squared L2 norms of all nonempty coordinate
    projections are added, which is the quantity the anchored-at-1 kernel
    formula of :func:`~qmckit.discrepancy.l2_discrepancy` measures.  With
    ``projections=False`` only the full-dimensional term is returned.

    For points with denominator 2^n every coefficient beyond level n - 1 in
    some coordinate has zero counting part, so the default
    ``max_level = n - 1`` already yields the exact value.
    """
    rows = _exact_rows(P, exact)
    is_exact = rows is not None
    n = P.dyadic_exponent()
    if rows is None:
        rows = [tuple(r) for r in P.coords.tolist()]
    if max_level is None:
        if n is None:
            raise ParameterError("max_level is required for non-dyadic points")
        max_level = max(n - 1, 0)
    if max_level < -1:
        raise ParameterError("max_level must be >= -1")
    s = P.s
    faces = [u for r in range(1, s + 1) for u in itertools.combinations(range(s), r)] if projections else [tuple(range(s))]
    if sum((max_level + 2) ** len(u) for u in faces) > MAX_LEVEL_VECTORS:
        raise CapacityError("too many Haar level vectors")
    partial = Fraction(0) if is_exact else 0.0
    tail = Fraction(0) if is_exact else 0.0
    for u in faces:
        sub = [tuple(x[i] for i in u) for x in rows]
        p_u, t_u = _one_face(sub, len(u), max_level, is_exact)
        partial += p_u
        tail += t_u
    tail_exact = n is not None and max_level >= n - 1
    return ParsevalResult(partial + tail, partial, tail, max_level, tail_exact, projections)
