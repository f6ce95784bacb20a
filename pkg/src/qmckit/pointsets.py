"""Non-digital constructions: van der Corput, Halton, Hammersley,
symmetrized Hammersley, rank-1 lattices, Kronecker sequences, extensible
lattices and linear congruential orbits.

Points are always returned in generation order n = 0, 1, 2, ...
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CapacityError, DegenerateOrbitError, ParameterError
from .numtheory import is_prime, radical_inverse

__all__ = [
    "PointSet",
    "LatticeRule",
    "LcgParams",
    "NonCoprimeBasesWarning",
    "van_der_corput",
    "halton",
    "hammersley",
    "symmetrized_hammersley",
    "rank1_lattice",
    "kronecker",
    "extensible_lattice",
    "lcg_pointset",
]


class NonCoprimeBasesWarning(UserWarning):
    """Halton/Hammersley bases share a factor; the sequence is not u.d."""


@dataclass
class PointSet:
    """N points in [0,1)^s.

    ``coords`` is an (N, s) float array.  ``exact`` optionally holds the same
    points as rows of :class:`~fractions.Fraction`; when present it is the
    source of truth and ``coords`` is its rounding.  ``base`` records the
    radix of an exact b-adic representation when there is one.
    """

    coords: np.ndarray
    exact: list[tuple[Fraction, ...]] | None = None
    base: int | None = None
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.ndim == 1:
            c = c[:, None]
        if c.ndim != 2:
            raise ParameterError("coords must be an (N, s) array")
        self.coords = c
        if self.exact is not None and len(self.exact) != c.shape[0]:
            raise ParameterError("exact rows do not match coords")

    @classmethod
    def from_exact(cls, rows: Sequence[Sequence[Fraction]], s: int | None = None, **kw) -> "PointSet":
        rows = [tuple(Fraction(v) for v in r) for r in rows]
        if s is None:
            s = len(rows[0]) if rows else 0
        coords = np.array([[float(v) for v in r] for r in rows], dtype=float).reshape(len(rows), s)
        return cls(coords, exact=rows, **kw)

    @property
    def N(self) -> int:
        return self.coords.shape[0]

    @property
    def s(self) -> int:
        return self.coords.shape[1]

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def sorted_rows(self) -> list[tuple]:
        """Lexicographically sorted rows (exact when available)."""
        rows = self.exact if self.exact is not None else [tuple(r) for r in self.coords.tolist()]
        return sorted(rows)

    def dyadic_exponent(self) -> int | None:
        """Smallest n with every coordinate in 2^-n Z, or None."""
        if self.exact is None:
            return None
        n = 0
        for row in self.exact:
            for v in row:
                d = v.denominator
                if d & (d - 1):
                    return None
                n = max(n, d.bit_length() - 1)
        return n

    def project(self, dims: Sequence[int]) -> "PointSet":
        dims = list(dims)
        exact = None if self.exact is None else [tuple(r[j] for j in dims) for r in self.exact]
        return PointSet(self.coords[:, dims], exact=exact, base=self.base, label=self.label)

    def __len__(self) -> int:
        return self.N


@dataclass(frozen=True)
class LatticeRule:
    """Rank-1 lattice rule with modulus N and generating vector g (reduced mod N)."""

    N: int
    g: tuple[int, ...]

    def __post_init__(self):
        if self.N < 1:
            raise ParameterError(f"lattice modulus N={self.N} must be positive")
        if len(self.g) < 1:
            raise ParameterError("generating vector is empty")
        object.__setattr__(self, "g", tuple(int(x) % self.N for x in self.g))

    @property
    def s(self) -> int:
        return len(self.g)

    def is_dual(self, h: Sequence[int]) -> bool:
        return sum(hj * gj for hj, gj in zip(h, self.g)) % self.N == 0


@dataclass(frozen=True)
class LcgParams:
    """x_{n+1} = a x_n + c over F_b with seed x0."""

    b: int
    a: int
    c: int = 0
    x0: int = 1

    def __post_init__(self):
        if not is_prime(self.b):
            raise ParameterError(f"b={self.b} must be prime")
        if self.a % self.b in (0, 1):
            raise ParameterError("multiplier must not be 0 or 1 mod b")


def _check_bases(bases: Sequence[int]) -> None:
    for b in bases:
        if int(b) < 2:
            raise ParameterError(f"base {b} < 2")
    for i in range(len(bases)):
        for j in range(i + 1, len(bases)):
            if math.gcd(bases[i], bases[j]) != 1:
                warnings.warn(
                    f"bases {bases[i]} and {bases[j]} are not coprime",
                    NonCoprimeBasesWarning,
                    stacklevel=3,
                )
                return


def van_der_corput(b: int, N: int) -> PointSet:
    if N < 1:
        raise ParameterError("N must be at least 1")
    rows = [(radical_inverse(b, n),) for n in range(N)]
    return PointSet.from_exact(rows, 1, base=b, label=f"vdc(b={b})")


def halton(bases: Sequence[int], N: int) -> PointSet:
    bases = [int(b) for b in bases]
    if not bases:
        raise ParameterError("empty basis vector")
    if N < 1:
        raise ParameterError("N must be at least 1")
    _check_bases(bases)
    rows = [tuple(radical_inverse(b, n) for b in bases) for n in range(N)]
    return PointSet.from_exact(rows, len(bases), label=f"halton{tuple(bases)}")


def hammersley(bases: Sequence[int], N: int) -> PointSet:
    bases = [int(b) for b in bases]
    if N < 1:
        raise ParameterError("N must be at least 1")
    _check_bases(bases)
    rows = [(Fraction(n, N),) + tuple(radical_inverse(b, n) for b in bases) for n in range(N)]
    return PointSet.from_exact(rows, 1 + len(bases), label=f"hammersley{tuple(bases)}")


def symmetrized_hammersley(n: int) -> PointSet:
    """Two-dimensional symmetrized Hammersley set with 2^n points.

    With t_i the bits of the index k (t_1 least significant) the first
    coordinate is k / 2^n and the second reads s_1 s_2 ... s_n after the
    binary point, where s_i = t_i for even i and 1 - t_i for odd i.
    """
    if n < 1:
        raise ParameterError("n must be at least 1")
    if n > 30:
        raise CapacityError("symmetrized Hammersley limited to n <= 30")
    N = 1 << n
    flip = sum(1 << (n - i) for i in range(1, n + 1, 2))  # bit n-i holds s_i
    rows = []
    for k in range(N):
        # s_i sits at weight 2^(n-i) in the numerator of the second coordinate
        rev = 0
        for i in range(1, n + 1):
            rev |= ((k >> (i - 1)) & 1) << (n - i)
        rows.append((Fraction(k, N), Fraction(rev ^ flip, N)))
    return PointSet.from_exact(rows, 2, base=2, label=f"symhammersley(n={n})")


def rank1_lattice(rule: LatticeRule) -> PointSet:
    N = rule.N
    rows = [tuple(Fraction(n * g % N, N) for g in rule.g) for n in range(N)]
    return PointSet.from_exact(rows, rule.s, label=f"lattice(N={N},g={rule.g})")


def kronecker(alpha: Sequence[float], N: int) -> PointSet:
    """{n alpha} in double precision."""
    if N < 1:
        raise ParameterError("N must be at least 1")
    a = np.asarray(alpha, dtype=float).reshape(-1)
    n = np.arange(N, dtype=float)[:, None]
    prod = n * a[None, :]
    frac = prod - np.floor(prod)
    # rounding of n*alpha - floor(n*alpha) can land on 1.0
    frac[frac >= 1.0] = 0.0
    return PointSet(frac, label=f"kronecker({a.tolist()})")


def extensible_lattice(a_digits: Sequence[Sequence[int]], b: int, m: int) -> PointSet:
    """First b^m points of {a phi_b(n)} for b-adic integers a.

    ``a_digits[j]`` lists the base-b digits of the j-th component, least
    significant first; at least m are needed.  The result is the lattice
    P(a mod b^m, b^m) listed in radical-inverse order.
    """
    if b < 2:
        raise ParameterError("base must be at least 2")
    if m < 0:
        raise ParameterError("level m must be nonnegative")
    a_m = []
    for ds in a_digits:
        if len(ds) < m:
            raise ParameterError(f"need {m} digits per component, got {len(ds)}")
        if any(not 0 <= d < b for d in ds[:m]):
            raise ParameterError("digits must lie in 0..b-1")
        a_m.append(sum(d * b**r for r, d in enumerate(ds[:m])))
    N = b**m
    rows = []
    for n in range(N):
        phi = radical_inverse(b, n)
        rows.append(tuple((a * phi) % 1 for a in a_m))
    return PointSet.from_exact(rows, len(a_m), base=b, label=f"extensible(b={b},m={m})")


def lcg_pointset(params: LcgParams) -> tuple[PointSet, int]:
    """Orbit of the recursion scaled by 1/b, and its period T."""
    b, a, c, x0 = params.b, params.a % params.b, params.c % params.b, params.x0 % params.b
    if c == (1 - a) * x0 % b:
        raise DegenerateOrbitError("seed is the fixed point of the recursion")
    seen = {}
    orbit = []
    x = x0
    while x not in seen:
        seen[x] = len(orbit)
        orbit.append(x)
        x = (a * x + c) % b
    T = len(orbit)
    rows = [(Fraction(v, b),) for v in orbit]
    return PointSet.from_exact(rows, 1, base=b, label=f"lcg(b={b},a={a},c={c},x0={x0})"), T
