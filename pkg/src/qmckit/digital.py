"""Digital nets and sequences over a prime field F_b.

Covers generating-matrix nets, polynomial lattice point sets, digital
Kronecker sequences, the classical Niederreiter matrices, b-adic Walsh
functions and the dual net with its character-sum test.

Digit conventions: an index n has little-endian digits n_0, n_1, ...; a
point coordinate x = xi_1/b + xi_2/b^2 + ... is produced by
(xi_1, xi_2, ...)^T = C (n_0, n_1, ...)^T over F_b.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CapacityError, ParameterError, RepresentationError
from .numtheory import (
    LaurentPrefix,
    Poly,
    as_poly,
    digits,
    is_prime,
    laurent_expand,
    monic_irreducibles,
    root_of_unity,
)
from .pointsets import PointSet

__all__ = [
    "GeneratingMatrices",
    "MAX_SEQUENCE_DEPTH",
    "rank_mod",
    "nullspace_mod",
    "digital_net",
    "polynomial_lattice_matrices",
    "polynomial_lattice",
    "hankel_matrices",
    "digital_kronecker",
    "niederreiter_matrices",
    "dual_net",
    "walsh",
    "walsh_multi",
    "net_character_sum",
]

MAX_SEQUENCE_DEPTH = 64
MAX_NET_POINTS = 1 << 24
MAX_DUAL_ENUM = 1 << 24


@dataclass(frozen=True)
class GeneratingMatrices:
    """s matrices over F_b with ``rows`` output digits and m input digits.

    For a net ``rows == m``; taller matrices give more output precision.
    """

    b: int
    matrices: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not is_prime(self.b):
            raise ParameterError(f"b={self.b} must be prime")
        if not self.matrices:
            raise ParameterError("need at least one generating matrix")
        mats = []
        shape = None
        for C in self.matrices:
            A = np.asarray(C, dtype=np.int64)
            if A.ndim != 2:
                raise ParameterError("generating matrices must be 2-d")
            if shape is None:
                shape = A.shape
            elif A.shape != shape:
                raise ParameterError(f"matrix shapes differ: {shape} vs {A.shape}")
            if A.size and (A.min() < 0 or A.max() >= self.b):
                raise ParameterError("matrix entries must lie in 0..b-1")
            A = A.copy()
            A.setflags(write=False)
            mats.append(A)
        object.__setattr__(self, "matrices", tuple(mats))

    @property
    def m(self) -> int:
        return self.matrices[0].shape[1]

    @property
    def rows(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def s(self) -> int:
        return len(self.matrices)

    def __eq__(self, other):
        if not isinstance(other, GeneratingMatrices):
            return NotImplemented
        return (
            self.b == other.b
            and self.s == other.s
            and all(np.array_equal(A, B) for A, B in zip(self.matrices, other.matrices))
        )

    def __hash__(self):
        return hash((self.b, tuple(A.tobytes() for A in self.matrices)))


# ---------------------------------------------------------------------------
# linear algebra over F_b


def _rref_mod(A: np.ndarray, b: int) -> tuple[np.ndarray, list[int]]:
    R = np.array(A, dtype=np.int64) % b
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, b) % b
        for i in range(rows):
            if i != r and R[i, c]:
                R[i] = (R[i] - R[i, c] * R[r]) % b
        pivots.append(c)
        r += 1
    return R, pivots


def rank_mod(A, b: int) -> int:
    """Rank of an integer matrix over F_b."""
    return len(_rref_mod(np.atleast_2d(A), b)[1])


def nullspace_mod(A, b: int) -> np.ndarray:
    """Basis of {v : A v = 0} over F_b as rows of a (dim, cols) array."""
    A = np.atleast_2d(np.asarray(A, dtype=np.int64))
    R, pivots = _rref_mod(A, b)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, pc in enumerate(pivots):
            basis[t, pc] = (-R[i, f]) % b
    return basis


# ---------------------------------------------------------------------------
# digits to points


def _index_digits(N: int, b: int, m: int) -> np.ndarray:
    n = np.arange(N, dtype=np.int64)
    powers = b ** np.arange(m, dtype=np.int64)
    return (n[:, None] // powers[None, :]) % b


def _digit_rows_to_pointset(Y: np.ndarray, b: int, **kw) -> PointSet:
    """Y has shape (N, s, r): output digits xi_1..xi_r per coordinate."""
    N, s, r = Y.shape
    if r == 0:
        rows = [tuple(Fraction(0) for _ in range(s)) for _ in range(N)]
        return PointSet.from_exact(rows, s, base=b, **kw)
    if b ** r < 2**62:
        w = b ** np.arange(r - 1, -1, -1, dtype=np.int64)
        nums = (Y * w).sum(axis=2).tolist()
    else:
        w = [b ** (r - 1 - i) for i in range(r)]
        nums = [[sum(int(d) * wi for d, wi in zip(Y[n, j], w)) for j in range(s)] for n in range(N)]
    den = b**r
    rows = [tuple(Fraction(v, den) for v in row) for row in nums]
    return PointSet.from_exact(rows, s, base=b, **kw)


def _check_net_size(b: int, m: int) -> int:
    if b**m > MAX_NET_POINTS:
        raise CapacityError(f"b^m = {b}^{m} points exceeds the guard {MAX_NET_POINTS}")
    return b**m


def digital_net(gen: GeneratingMatrices, n_points: int | None = None) -> PointSet:
    """Digital (t, m, s)-net (or the first ``n_points`` of a sequence).

    Parameters
    ----------
    gen : GeneratingMatrices
        s matrices with m columns over F_b.
    n_points : int, optional
        Defaults to b^m; may not exceed it.

    Returns
    -------
    PointSet
        Exact points with denominator b^rows.
    """
    b, m = gen.b, gen.m
    full = _check_net_size(b, m)
    N = full if n_points is None else int(n_points)
    if not 1 <= N <= full:
        raise ParameterError(f"n_points must lie in 1..{full}")
    D = _index_digits(N, b, m)
    Y = np.stack([(D @ C.T) % b for C in gen.matrices], axis=1)
    return _digit_rows_to_pointset(Y, b, label=f"digital_net(b={b},m={m},s={gen.s})")


# ---------------------------------------------------------------------------
# polynomial lattices


def _poly_args(p, q, b):
    p = as_poly(p, b)
    if p.degree < 1:
        raise ParameterError("modulus polynomial must have degree >= 1")
    qs = [as_poly(qj, p.b) for qj in q]
    if not qs:
        raise ParameterError("need at least one polynomial q_j")
    return p, qs


def polynomial_lattice_matrices(p, q: Sequence, b: int | None = None) -> GeneratingMatrices:
    """Generating matrices of P(q, p): C_j[i-1, r-1] = u^(j)_{i+r-1}."""
    p, qs = _poly_args(p, q, b)
    m = p.degree
    mats = []
    for qj in qs:
        u = laurent_expand(qj, p, 2 * m - 1).coeffs
        C = np.array([[u[i + r] for r in range(m)] for i in range(m)], dtype=np.int64)
        mats.append(C)
    return GeneratingMatrices(p.b, tuple(mats))


def polynomial_lattice(p, q: Sequence, b: int | None = None, method: str = "laurent") -> PointSet:
    """Polynomial lattice point set x_h = ({h q_j / p}_{b,m})_j, deg h < m.

    ``method="laurent"`` expands each h q_j / p directly; ``"matrix"``
    goes through :func:`polynomial_lattice_matrices`.  Both give the same
    exact set in the same order (h enumerated by its digit encoding).
    """
    p, qs = _poly_args(p, q, b)
    m, bb = p.degree, p.b
    if method == "matrix":
        ps = digital_net(polynomial_lattice_matrices(p, qs))
        ps.label = f"polylattice(p={p})"
        return ps
    if method != "laurent":
        raise ParameterError(f"unknown method {method!r}")
    N = _check_net_size(bb, m)
    rows = []
    for n in range(N):
        h = Poly.from_int(n, bb)
        rows.append(tuple(laurent_expand(h * qj, p, m).fractional_part() for qj in qs))
    return PointSet.from_exact(rows, len(qs), base=bb, label=f"polylattice(p={p})")


# ---------------------------------------------------------------------------
# digital Kronecker sequences


def _kronecker_precision(fs: Sequence[LaurentPrefix], n_points: int, precision: int | None):
    if not fs:
        raise ParameterError("need at least one Laurent series")
    b = fs[0].b
    if any(f.b != b for f in fs):
        raise ParameterError("all series must share the base")
    if n_points < 1:
        raise ParameterError("n_points must be at least 1")
    R = max(1, len(digits(n_points - 1, b)))
    depth = min(f.m for f in fs)
    avail = depth - R + 1
    if precision is None:
        precision = min(avail, MAX_SEQUENCE_DEPTH)
    if precision < 1 or precision > avail:
        raise CapacityError(
            f"depth {depth} supports {max(avail, 0)} output digits for {n_points} points, "
            f"requested {precision}"
        )
    return b, R, precision


def hankel_matrices(fs: Sequence[LaurentPrefix], n_digits: int, precision: int) -> GeneratingMatrices:
    """Hankel generating matrices C_j[k-1, i] = f_{j, k+i}."""
    b = fs[0].b
    mats = []
    for f in fs:
        if f.m < precision + n_digits - 1:
            raise CapacityError("series too short for the requested Hankel matrix")
        c = f.coeffs
        mats.append(np.array([[c[k + i] for i in range(n_digits)] for k in range(precision)], dtype=np.int64))
    return GeneratingMatrices(b, tuple(mats))


def digital_kronecker(
    fs: Sequence[LaurentPrefix],
    n_points: int,
    precision: int | None = None,
    method: str = "laurent",
) -> PointSet:
    """First ``n_points`` of the digital Kronecker sequence ({n(x) f_j}_b)_j.

    Only digits fully determined by the supplied prefixes are returned: with
    depth M and R index digits that is M - R + 1 output digits.

    Parameters
    ----------
    fs : sequence of LaurentPrefix
        Coefficients f_{j,1}, f_{j,2}, ... of each series.
    n_points : int
    precision : int, optional
        Output digits; defaults to the largest available (at most 64).
    method : {"laurent", "matrix"}
        Polynomial multiplication or the Hankel-matrix digital sequence.
    """
    fs = list(fs)
    b, R, prec = _kronecker_precision(fs, n_points, precision)
    if method == "matrix":
        gen = hankel_matrices(fs, R, prec)
        ps = digital_net(gen, n_points) if b**R <= MAX_NET_POINTS else None
        if ps is None:
            raise CapacityError("too many index digits")
        ps.label = f"digital_kronecker(b={b})"
        return ps
    if method != "laurent":
        raise ParameterError(f"unknown method {method!r}")
    # f = F(x) / x^M with F = sum_k f_k x^{M-k}; coefficient of x^{-k} in
    # n(x) f equals that of x^{M-k} in n(x) F(x)
    Fs = []
    for f in fs:
        M = f.m
        Fs.append((M, Poly(b, tuple(f.coeffs[M - 1 - e] for e in range(M)))))
    den = b**prec
    rows = []
    for n in range(n_points):
        nx = Poly.from_int(n, b)
        row = []
        for M, F in Fs:
            prod = nx * F
            num = 0
            for k in range(1, prec + 1):
                num = num * b + prod.coeff(M - k)
            row.append(Fraction(num, den))
        rows.append(tuple(row))
    return PointSet.from_exact(rows, len(fs), base=b, label=f"digital_kronecker(b={b})")


# ---------------------------------------------------------------------------
# Niederreiter


def niederreiter_matrices(b: int, s: int, m: int) -> GeneratingMatrices:
    """Classical Niederreiter generating matrices with y_{j,i,k} = x^k.

    p_j runs over the monic irreducibles of F_b[x] in (degree, lexicographic)
    order starting at x.  Row i (1-based) of C_j writes i - 1 = Q e_j + k with
    e_j = deg p_j and 0 <= k < e_j, and holds the first m Laurent
    coefficients of x^k / p_j^(Q+1).
    """
    if not is_prime(b):
        raise ParameterError(f"b={b} must be prime")
    if s < 1 or m < 1:
        raise ParameterError("s and m must be positive")
    ps = list(itertools.islice(monic_irreducibles(b), s))
    if len(ps) < s:
        raise CapacityError(f"fewer than {s} monic irreducibles below the degree cap")
    mats = []
    for p in ps:
        e = p.degree
        C = np.zeros((m, m), dtype=np.int64)
        powers = {}
        for i in range(1, m + 1):
            Q, k = divmod(i - 1, e)
            if Q + 1 not in powers:
                powers[Q + 1] = p ** (Q + 1)
            C[i - 1] = laurent_expand(Poly.x(b, k), powers[Q + 1], m).coeffs
        mats.append(C)
    return GeneratingMatrices(b, tuple(mats))


# ---------------------------------------------------------------------------
# dual net, Walsh functions, character sums


def dual_net(gen: GeneratingMatrices) -> list[tuple[int, ...]]:
    """All k in {0..b^m-1}^s with C_1^T k_1 + ... + C_s^T k_s = 0 over F_b.

    Sorted lexicographically; always contains the zero vector.
    """
    b, m, s = gen.b, gen.m, gen.s
    if gen.rows != m:
        raise ParameterError("dual net needs square m x m matrices")
    if b ** (m * s) > MAX_DUAL_ENUM:
        raise CapacityError(f"b^(ms) = {b}^{m * s} exceeds the guard {MAX_DUAL_ENUM}")
    A = np.concatenate([C.T for C in gen.matrices], axis=1)  # m x (m s)
    basis = nullspace_mod(A, b)
    dim = basis.shape[0]
    if dim == 0:
        return [tuple([0] * s)]
    coeffs = np.array(list(itertools.product(range(b), repeat=dim)), dtype=np.int64)
    vecs = (coeffs @ basis) % b  # each row is (k_1 digits, ..., k_s digits)
    powers = b ** np.arange(m, dtype=np.int64)
    ks = vecs.reshape(-1, s, m) @ powers
    return sorted(tuple(int(v) for v in row) for row in ks)


def _b_adic_digits(x, b: int, m: int | None) -> list[int]:
    x = Fraction(x)
    if not 0 <= x < 1:
        raise RepresentationError(f"{x} is not in [0,1)")
    den = x.denominator
    depth = 0
    d = den
    while d % b == 0:
        d //= b
        depth += 1
    if d != 1:
        raise RepresentationError(f"{x} is not a {b}-adic rational")
    if m is None:
        m = depth
    elif depth > m:
        raise RepresentationError(f"{x} needs {depth} base-{b} digits, more than {m}")
    num = x.numerator * b ** (m - depth)
    # xi_1 .. xi_m, most significant first
    return [(num // b ** (m - 1 - i)) % b for i in range(m)]


def _walsh_exponent(b: int, k: int, x, m: int | None = None) -> int:
    if k < 0:
        raise ParameterError("Walsh index must be nonnegative")
    kappa = digits(k, b)
    xi = _b_adic_digits(x, b, m)
    return sum(kd * xd for kd, xd in zip(kappa, xi)) % b


def walsh(b: int, k: int, x, m: int | None = None) -> complex:
    """k-th b-adic Walsh function exp(2 pi i (kappa_0 xi_1 + kappa_1 xi_2 + ...)/b).

    ``x`` must be an exact b-adic rational (at most m digits when m is given).
    """
    return root_of_unity(_walsh_exponent(b, k, x, m), b)


def walsh_multi(b: int, k: Sequence[int], x: Sequence, m: int | None = None) -> complex:
    """Product of one-dimensional Walsh functions over the coordinates."""
    if len(k) != len(x):
        raise ParameterError("index and point dimensions differ")
    e = sum(_walsh_exponent(b, kj, xj, m) for kj, xj in zip(k, x)) % b
    return root_of_unity(e, b)


def net_character_sum(net: PointSet, k: Sequence[int], b: int | None = None):
    """sum_n wal_k(x_n) evaluated through exponent counts mod b.

    For a digital net the residues are either all zero or equidistributed,
    so the result is the exact integer N or 0.  Other exact point sets give
    a complex value.
    """
    if net.exact is None:
        raise RepresentationError("character sums need exact coordinates")
    b = b if b is not None else net.base
    if b is None:
        raise RepresentationError("point set carries no base")
    if len(k) != net.s:
        raise ParameterError("index dimension does not match the point set")
    counts = [0] * b
    for row in net.exact:
        counts[sum(_walsh_exponent(b, kj, xj) for kj, xj in zip(k, row)) % b] += 1
    N = net.N
    if counts[0] == N:
        return N
    if all(c == counts[0] for c in counts):
        return 0
    return sum(c * root_of_unity(r, b) for r, c in enumerate(counts))
