"""Reproducing kernels, worst-case and average-case errors, Mercer eigenpairs.

Every kernel is a tensor product of a one-dimensional kernel K_1 on [0,1]
and comes with closed forms for int K_1(x, y) dy and the double integral,
so that

    wce^2 = int int K - (2/N) sum_n int K(., x_n) + (1/N^2) sum_{n,n'} K(x_n, x_n').
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import CapacityError, NumericalConsistencyError, ParameterError
from .numtheory import bernoulli, bernoulli_numbers
from .pointsets import LatticeRule, PointSet

__all__ = [
    "FAMILIES",
    "KernelSpec",
    "parse_space",
    "kernel_eval",
    "gram_matrix",
    "wce_kernel",
    "wce_kernel_sq",
    "h_function",
    "korobov_constant",
    "zeta",
    "DualSum",
    "wce_korobov_dual",
    "wce_korobov_closed",
    "korobov_average_bound",
    "jensen_bound",
    "EigenPair",
    "min_kernel_eigen",
    "anchored_eigenvalues",
    "sobolev_eigen_table",
    "operator_residual",
    "mercer_partial_sum",
    "avg_case_error",
    "jensen_check",
]

FAMILIES = ("anchored0", "anchored1", "sobolev", "korobov", "min", "poly-monomial", "poly-bernoulli")
KOROBOV_SERIES_CAP = 1 << 20
DUAL_GUARD = 10**7


@dataclass(frozen=True)
class KernelSpec:
    """Tagged one-dimensional kernel, used as an s-fold tensor product.

    Parameters
    ----------
    family : str
        One of :data:`FAMILIES`.
    alpha : float, optional
        Korobov smoothness, alpha > 1/2.
    r : int, optional
        Degree of the polynomial families.
    tol : float
        Truncation tolerance for the Korobov series at non-integer alpha.
    """

    family: str
    alpha: float | None = None
    r: int | None = None
    tol: float = 1e-10

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown kernel family {self.family!r}")
        if self.family == "korobov":
            if self.alpha is None or not self.alpha > 0.5:
                raise ParameterError("Korobov kernels need alpha > 1/2")
        if self.family.startswith("poly"):
            if self.r is None or self.r < 0:
                raise ParameterError("polynomial kernels need a degree r >= 0")

    @property
    def integer_alpha(self) -> int | None:
        if self.alpha is not None and float(self.alpha).is_integer():
            return int(self.alpha)
        return None

    def k1(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Elementwise one-dimensional kernel."""
        f = self.family
        if f == "anchored0":
            return 1.0 + np.minimum(x, y)
        if f == "anchored1":
            return 1.0 + np.minimum(1.0 - x, 1.0 - y)
        if f == "min":
            return np.minimum(x, y)
        if f == "sobolev":
            return 1.0 + (x - 0.5) * (y - 0.5) + 0.5 * bernoulli(2, np.abs(x - y))
        if f == "korobov":
            return _korobov_k1(x - y, self.alpha, self.tol)
        if f == "poly-monomial":
            xy = x * y
            return sum(xy**i for i in range(self.r + 1))
        # poly-bernoulli
        return sum(bernoulli(i, x) * bernoulli(i, y) for i in range(self.r + 1))

    def single_integral(self, x: np.ndarray) -> np.ndarray:
        """int_0^1 K_1(x, y) dy."""
        f = self.family
        if f == "anchored0":
            return 1.0 + x - x * x / 2.0
        if f == "anchored1":
            return (3.0 - x * x) / 2.0
        if f == "min":
            return x - x * x / 2.0
        if f == "poly-monomial":
            return sum(x**i / (i + 1) for i in range(self.r + 1))
        return np.ones_like(np.asarray(x, dtype=float))

    def double_integral(self) -> float:
        f = self.family
        if f in ("anchored0", "anchored1"):
            return 4.0 / 3.0
        if f == "min":
            return 1.0 / 3.0
        if f == "poly-monomial":
            return sum(1.0 / (i + 1) ** 2 for i in range(self.r + 1))
        return 1.0

    def name(self) -> str:
        if self.family == "korobov":
            return f"korobov:{self.alpha:g}"
        if self.family.startswith("poly"):
            return f"{self.family}:{self.r}"
        return self.family


def parse_space(text: str) -> KernelSpec:
    """Parse names like ``anchored1``, ``korobov:2`` or ``poly-bernoulli:3``."""
    name, _, arg = text.partition(":")
    name = name.strip().lower()
    if name not in FAMILIES:
        raise ParameterError(f"unknown space {text!r}; expected one of {', '.join(FAMILIES)}")
    if name == "korobov":
        try:
            return KernelSpec(name, alpha=float(arg))
        except ValueError:
            raise ParameterError(f"bad Korobov smoothness in {text!r}") from None
    if name.startswith("poly"):
        try:
            return KernelSpec(name, r=int(arg))
        except ValueError:
            raise ParameterError(f"bad polynomial degree in {text!r}") from None
    if arg:
        raise ParameterError(f"space {name} takes no argument")
    return KernelSpec(name)


def korobov_constant(alpha: int) -> float:
    """(-1)^(alpha+1) (2 pi)^(2 alpha) / (2 alpha)!, so that
    sum_{h != 0} |h|^(-2 alpha) e(h x) = korobov_constant(alpha) B_{2 alpha}({x})."""
    return (-1) ** (alpha + 1) * (2 * math.pi) ** (2 * alpha) / math.factorial(2 * alpha)


def _korobov_k1(d: np.ndarray, alpha: float, tol: float) -> np.ndarray:
    # the kernel is even and 1-periodic; folding onto [0, 1/2] keeps K(x, y) = K(y, x) bit for bit
    d = np.abs(np.asarray(d, dtype=float))
    t = d - np.floor(d)
    t = np.minimum(t, 1.0 - t)
    if float(alpha).is_integer():
        a = int(alpha)
        return 1.0 + korobov_constant(a) * bernoulli(2 * a, t)
    # tail of 2 sum_{h > M} h^(-2a) is below 2 M^(1-2a) / (2a - 1)
    M = math.ceil((tol * (2 * alpha - 1) / 2) ** (1.0 / (1 - 2 * alpha)))
    if M > KOROBOV_SERIES_CAP:
        raise CapacityError(f"Korobov series needs {M} terms for tolerance {tol}")
    out = np.ones_like(t)
    flat = t.reshape(-1)
    acc = np.zeros_like(flat)
    rows = max(1, (1 << 22) // 4096)
    for a in range(0, M, 4096):
        h = np.arange(a + 1, min(M, a + 4096) + 1, dtype=float)
        w = h ** (-2 * alpha)
        for r in range(0, flat.size, rows):
            acc[r : r + rows] += np.cos(2 * np.pi * np.outer(flat[r : r + rows], h)) @ w
    return out + 2 * acc.reshape(t.shape)


def _as_points(P) -> np.ndarray:
    X = P.coords if isinstance(P, PointSet) else np.asarray(P, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    return X


def _check_domain(*arrays: np.ndarray) -> None:
    for A in arrays:
        if np.any(A < 0) or np.any(A > 1):
            raise ParameterError("kernel arguments must lie in [0,1]^s")


def kernel_eval(spec: KernelSpec, x: Sequence[float], y: Sequence[float]) -> float:
    """prod_j K_1(x_j, y_j)."""
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.shape != y.shape:
        raise ParameterError("x and y differ in dimension")
    _check_domain(x, y)
    return float(np.prod(spec.k1(x, y)))


def gram_matrix(spec: KernelSpec, X, Y=None) -> np.ndarray:
    """K(x_a, y_b) for all rows of X and Y."""
    X = _as_points(X)
    Y = X if Y is None else _as_points(Y)
    _check_domain(X, Y)
    return np.prod(spec.k1(X[:, None, :], Y[None, :, :]), axis=2)


def _pair_sum(spec: KernelSpec, X: np.ndarray, budget: int = 1 << 22) -> float:
    N, s = X.shape
    step = max(1, budget // max(1, N * s))
    total = 0.0
    for a in range(0, N, step):
        total += float(np.sum(np.prod(spec.k1(X[a : a + step, None, :], X[None, :, :]), axis=2)))
    return total


def wce_kernel_sq(spec: KernelSpec, P) -> float:
    """Squared worst-case error of the equal-weight rule on P."""
    X = _as_points(P)
    _check_domain(X)
    N, s = X.shape
    dd = spec.double_integral() ** s
    single = float(np.sum(np.prod(spec.single_integral(X), axis=1)))
    return dd - 2.0 / N * single + _pair_sum(spec, X) / (N * N)


def wce_kernel(spec: KernelSpec, P) -> float:
    """Worst-case error; tiny negative radicands from rounding are clipped."""
    v = wce_kernel_sq(spec, P)
    if v < -1e-12:
        raise NumericalConsistencyError(f"negative squared worst-case error {v}")
    return math.sqrt(max(v, 0.0))


def avg_case_error(cov: KernelSpec, P) -> float:
    """Average-case error for a covariance kernel; same formula as the wce."""
    return wce_kernel(cov, P)


def h_function(spec: KernelSpec, P, y) -> np.ndarray | float:
    """h(y) = int K(y, x) dx - (1/N) sum_n K(y, x_n); y may be one point or rows."""
    X = _as_points(P)
    Y = np.asarray(y, dtype=float)
    single = Y.ndim <= 1
    Y = Y.reshape(1, -1) if single else Y
    if Y.shape[1] != X.shape[1]:
        raise ParameterError("y has the wrong dimension")
    _check_domain(X, Y)
    integral = np.prod(spec.single_integral(Y), axis=1)
    out = integral - gram_matrix(spec, Y, X).mean(axis=1)
    return float(out[0]) if single else out


# ---------------------------------------------------------------------------
# Korobov lattice errors


@lru_cache(maxsize=None)
def zeta(x: float) -> float:
    """Riemann zeta for real x > 1 by Euler-Maclaurin summation."""
    if not x > 1:
        raise ParameterError("zeta needs x > 1")
    M = 32
    head = math.fsum(k ** -x for k in range(1, M))
    tail = M ** (1 - x) / (x - 1) + 0.5 * M**-x
    B = bernoulli_numbers(16)
    rising = x  # x (x+1) ... (x + 2i - 2)
    for i in range(1, 9):
        term = float(B[2 * i]) / math.factorial(2 * i) * rising * M ** (-x - 2 * i + 1)
        tail += term
        rising *= (x + 2 * i - 1) * (x + 2 * i)
    return head + tail


@dataclass(frozen=True)
class DualSum:
    """Truncated dual-lattice sum and a bound on everything it omits."""

    value: float
    tail_bound: float
    trunc: int
    terms: int


def _r_alpha(h: np.ndarray, alpha: float) -> np.ndarray:
    a = np.abs(h).astype(float)
    out = np.ones_like(a)
    nz = a > 0
    out[nz] = a[nz] ** (-2 * alpha)
    return out


def wce_korobov_dual(rule: LatticeRule, alpha: float, trunc: int) -> DualSum:
    """Squared Korobov wce from the dual lattice, restricted to 0 < |h|_inf <= trunc.

    The omitted part is bounded by sum over |h|_inf > trunc of r_alpha(h),
    which integral comparison turns into
    (1 + 2 S_T + 2 T^(1-2 alpha)/(2 alpha - 1))^s - (1 + 2 S_T)^s.
    """
    if not alpha > 0.5:
        raise ParameterError("alpha must exceed 1/2")
    if trunc < 0:
        raise ParameterError("trunc must be nonnegative")
    s, N = rule.s, rule.N
    if (2 * trunc + 1) ** s > DUAL_GUARD:
        raise CapacityError(f"(2*{trunc}+1)^{s} frequencies exceed the guard")
    hs = np.arange(-trunc, trunc + 1, dtype=np.int64)
    r1 = _r_alpha(hs, alpha)
    # accumulate residues and weights coordinate by coordinate
    res = np.zeros(1, dtype=np.int64)
    w = np.ones(1)
    for gj in rule.g:
        res = (res[:, None] + hs[None, :] * gj) % N
        w = w[:, None] * r1[None, :]
        res, w = res.reshape(-1), w.reshape(-1)
    mask = res == 0
    value = float(np.sum(w[mask])) - 1.0  # drop h = 0
    if trunc == 0:
        tail = (1 + 2 * zeta(2 * alpha)) ** s - 1
    else:
        S_T = float(np.sum(r1[trunc + 1 :]))
        tail = (1 + 2 * S_T + 2 * trunc ** (1 - 2 * alpha) / (2 * alpha - 1)) ** s - (1 + 2 * S_T) ** s
    return DualSum(value, tail, trunc, int(mask.sum()) - 1)


def _omega_table(N: int, alpha: int) -> np.ndarray:
    """omega(k) = korobov_constant(alpha) B_{2 alpha}(k/N) for k = 0..N-1."""
    return korobov_constant(alpha) * bernoulli(2 * alpha, np.arange(N) / N)


def wce_korobov_closed(rule: LatticeRule, alpha: int) -> float:
    """Squared Korobov wce through the Bernoulli closed form (integer alpha)."""
    if not float(alpha).is_integer() or alpha < 1:
        raise ParameterError("closed form needs a positive integer alpha; use the dual sum")
    alpha = int(alpha)
    N = rule.N
    omega = _omega_table(N, alpha)
    n = np.arange(N, dtype=np.int64)
    prod = np.ones(N)
    for gj in rule.g:
        prod *= 1.0 + omega[(n * gj) % N]
    return float(-1.0 + prod.mean())


def korobov_average_bound(N: int, s: int, alpha: float) -> float:
    """(1 + 2 zeta(2 alpha))^s / (N - 1), the mean of wce^2 over G_N^s bound."""
    if N < 2:
        raise ParameterError("N must be at least 2")
    if not alpha > 0.5:
        raise ParameterError("alpha must exceed 1/2")
    return (1 + 2 * zeta(2 * alpha)) ** s / (N - 1)


def jensen_bound(N: int, s: int, alpha: float, lam: float) -> float:
    """(1 + 2 zeta(2 alpha lam))^(s/lam) / (N - 1)^(1/lam) for 1/(2 alpha) < lam <= 1."""
    if not (1 / (2 * alpha) < lam <= 1):
        raise ParameterError("lambda must lie in (1/(2 alpha), 1]")
    return (1 + 2 * zeta(2 * alpha * lam)) ** (s / lam) / (N - 1) ** (1 / lam)


def jensen_check(terms: Sequence[float], lam: float) -> tuple[bool, float, float]:
    """Check (sum a)^lam <= sum a^lam; returns (holds, lhs, rhs)."""
    if not 0 < lam <= 1:
        raise ParameterError("lambda must lie in (0, 1]")
    a = np.asarray(terms, dtype=float)
    if np.any(a < 0):
        raise ParameterError("terms must be nonnegative")
    lhs = float(a.sum() ** lam)
    rhs = float(np.sum(a**lam))
    return lhs <= rhs * (1 + 1e-12), lhs, rhs


# ---------------------------------------------------------------------------
# Mercer eigenpairs


@dataclass(frozen=True)
class EigenPair:
    index: int
    value: float
    func: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))


def min_kernel_eigen(ell: int) -> EigenPair:
    """lambda = ((ell - 1/2) pi)^-2, psi(x) = sqrt(2) sin((ell - 1/2) pi x)."""
    if ell < 1:
        raise ParameterError("index must be at least 1")
    w = (ell - 0.5) * math.pi
    return EigenPair(ell, w**-2, lambda x, w=w: math.sqrt(2.0) * np.sin(w * x))


def _bisect(f, lo: float, hi: float, tol: float = 1e-15) -> float:
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo < tol * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def anchored_eigenvalues(count: int) -> list[EigenPair]:
    """Eigenpairs of K(x, y) = 1 + min(x, y).

    a_l solves tan a = 1/a in ((l-1) pi, l pi); bisection runs on
    a sin a - cos a, which has no poles.  lambda_l = a_l^-2 and the
    normalized eigenfunction is cos(a_l (1 - x)) / sqrt(1/2 + sin(2 a_l)/(4 a_l)).
    """
    if count < 1:
        raise ParameterError("count must be at least 1")
    out = []
    f = lambda a: a * math.sin(a) - math.cos(a)
    for ell in range(1, count + 1):
        lo, hi = (ell - 1) * math.pi, ell * math.pi
        a = _bisect(f, lo + 1e-300 if ell == 1 else lo, hi)
        norm = math.sqrt(0.5 + math.sin(2 * a) / (4 * a))
        out.append(EigenPair(ell, a**-2, lambda x, a=a, c=norm: np.cos(a * (1.0 - x)) / c))
    return out


def sobolev_eigen_table(count: int) -> list[EigenPair]:
    """Cited eigenpairs 1, (k pi)^-2 with 1, sqrt(2) cos(k pi x) for the unanchored kernel.

    Provided for verification only: check them with :func:`operator_residual`
    before relying on them.
    """
    out = [EigenPair(1, 1.0, lambda x: np.ones_like(x))]
    for k in range(1, count):
        out.append(EigenPair(k + 1, (k * math.pi) ** -2, lambda x, k=k: math.sqrt(2.0) * np.cos(k * math.pi * x)))
    return out


def operator_residual(spec: KernelSpec, pair: EigenPair, panels: int = 10_000, points: int = 257) -> float:
    """max_x |T_K psi(x) - lambda psi(x)| with a composite midpoint rule in y."""
    y = (np.arange(panels) + 0.5) / panels
    psi_y = pair(y) / panels
    x = np.linspace(0.0, 1.0, points)
    Tpsi = spec.k1(x[:, None], y[None, :]) @ psi_y
    return float(np.max(np.abs(Tpsi - pair.value * pair(x))))


def mercer_partial_sum(pairs: Sequence[EigenPair], x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """sum_l lambda_l psi_l(x) psi_l(y) on the outer grid of x and y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.zeros((x.size, y.size))
    for p in pairs:
        out += p.value * np.outer(p(x), p(y))
    return out
