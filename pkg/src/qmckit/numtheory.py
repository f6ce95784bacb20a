"""Exact arithmetic over prime fields and the helpers built on it.

Radical inverses, primitive roots, polynomials and truncated Laurent series
over F_b, Bernoulli polynomials and Gauss sums.  Rational results are
:class:`fractions.Fraction`; float entry points are separate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import ParameterError

__all__ = [
    "is_prime",
    "PrimeField",
    "Poly",
    "LaurentPrefix",
    "digits",
    "from_digits",
    "radical_inverse",
    "radical_inverse_float",
    "factorize",
    "multiplicative_order",
    "primitive_root",
    "laurent_expand",
    "monic_irreducibles",
    "bernoulli_numbers",
    "bernoulli_coefficients",
    "bernoulli",
    "root_of_unity",
    "additive_character_sum",
    "gauss_sum_type1",
    "gauss_sum_type2",
]


def is_prime(n: int) -> bool:
    """Deterministic trial division up to sqrt(n)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _require_prime(b: int, what: str = "b") -> None:
    if not isinstance(b, int) or not is_prime(b):
        raise ParameterError(f"{what}={b!r} must be prime")


@dataclass(frozen=True)
class PrimeField:
    """The field F_b with canonical residues 0..b-1."""

    b: int

    def __post_init__(self):
        _require_prime(self.b)

    def __call__(self, value: int) -> int:
        return value % self.b

    def inv(self, a: int) -> int:
        a %= self.b
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_b")
        return pow(a, -1, self.b)

    def elements(self) -> range:
        return range(self.b)


# ---------------------------------------------------------------------------
# digits and radical inverse


def digits(n: int, b: int, length: int | None = None) -> list[int]:
    """Base-b digits of n, least significant first.

    With ``length`` the list is zero padded (or an error raised when n needs
    more digits).
    """
    if b < 2:
        raise ParameterError(f"base {b} < 2")
    if n < 0:
        raise ParameterError(f"n={n} is negative")
    out = []
    while n:
        n, r = divmod(n, b)
        out.append(r)
    if length is not None:
        if len(out) > length:
            raise ParameterError(f"{len(out)} digits do not fit in {length}")
        out.extend([0] * (length - len(out)))
    return out


def from_digits(ds: Sequence[int], b: int) -> int:
    value = 0
    for d in reversed(ds):
        value = value * b + d
    return value


def radical_inverse(b: int, n: int) -> Fraction:
    """b-adic radical inverse phi_b(n) as an exact rational."""
    if b < 2:
        raise ParameterError(f"base {b} < 2")
    if n < 0:
        raise ParameterError(f"n={n} is negative")
    num, den = 0, 1
    while n:
        n, r = divmod(n, b)
        num = num * b + r
        den *= b
    return Fraction(num, den)


def radical_inverse_float(b: int, n: int) -> float:
    return float(radical_inverse(b, n))


# ---------------------------------------------------------------------------
# multiplicative structure of Z_N


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division."""
    if n < 1:
        raise ParameterError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def multiplicative_order(a: int, n: int) -> int:
    """Order of a in (Z/nZ)^x; a must be a unit."""
    a %= n
    if math.gcd(a, n) != 1:
        raise ParameterError(f"{a} is not a unit mod {n}")
    if n == 1:
        return 1
    k, x = 1, a
    while x != 1:
        x = x * a % n
        k += 1
    return k


@lru_cache(maxsize=None)
def primitive_root(N: int) -> int:
    """Smallest generator of F_N^x."""
    _require_prime(N, "N")
    if N == 2:
        return 1
    phi = N - 1
    qs = list(factorize(phi))
    for g in range(2, N):
        if all(pow(g, phi // q, N) != 1 for q in qs):
            return g
    raise AssertionError("unreachable: every prime field has a primitive root")


# ---------------------------------------------------------------------------
# polynomials over F_b


@dataclass(frozen=True)
class Poly:
    """Polynomial over F_b, coefficients in ascending degree.

    Trailing zeros are stripped so the zero polynomial has ``coeffs == ()``
    and ``degree == -1`` (stand-in for minus infinity).
    """

    b: int
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        _require_prime(self.b)
        cs = [c % self.b for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_int(cls, n: int, b: int) -> "Poly":
        """The polynomial n(x) whose coefficients are the base-b digits of n."""
        return cls(b, tuple(digits(n, b)))

    @classmethod
    def x(cls, b: int, power: int = 1) -> "Poly":
        return cls(b, (0,) * power + (1,))

    def to_int(self) -> int:
        return from_digits(self.coeffs, self.b)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def _check(self, other: "Poly") -> None:
        if other.b != self.b:
            raise ParameterError("polynomials over different fields")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.b, tuple(self.coeff(k) + other.coeff(k) for k in range(n)))

    def __neg__(self) -> "Poly":
        return Poly(self.b, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Poly(self.b)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, c in enumerate(other.coeffs):
                    out[i + j] += a * c
        return Poly(self.b, tuple(out))

    def __pow__(self, e: int) -> "Poly":
        result = Poly(self.b, (1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        b = self.b
        rem = list(self.coeffs)
        d = other.degree
        inv_lead = pow(other.coeffs[-1], -1, b)
        quot = [0] * max(len(rem) - d, 0)
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k] * inv_lead % b
            if c:
                quot[k - d] = c
                for i, oc in enumerate(other.coeffs):
                    rem[k - d + i] = (rem[k - d + i] - c * oc) % b
        return Poly(b, tuple(quot)), Poly(b, tuple(rem[:d]))

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_irreducible(self) -> bool:
        """Trial division by every monic polynomial of degree <= deg/2."""
        d = self.degree
        if d < 1:
            return False
        if d == 1:
            return True
        for k in range(1, d // 2 + 1):
            for tail in range(self.b**k):
                cand = Poly(self.b, tuple(digits(tail, self.b, k)) + (1,))
                if (self % cand).is_zero():
                    return False
        return True

    def __repr__(self) -> str:
        if self.is_zero():
            return f"Poly[{self.b}](0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                mono = "1" if k == 0 else ("x" if k == 1 else f"x^{k}")
                terms.append(mono if c == 1 and k else f"{c}" + ("" if k == 0 else "*" + mono))
        return f"Poly[{self.b}](" + " + ".join(reversed(terms)) + ")"


def as_poly(p, b: int | None = None) -> Poly:
    """Accept a Poly, an int (digit encoding) or a coefficient sequence."""
    if isinstance(p, Poly):
        if b is not None and p.b != b:
            raise ParameterError("polynomial base mismatch")
        return p
    if b is None:
        raise ParameterError("base required to build a polynomial")
    if isinstance(p, int):
        return Poly.from_int(p, b)
    return Poly(b, tuple(p))


MAX_DEGREE_SEARCH = 24


def monic_irreducibles(b: int, max_degree: int = MAX_DEGREE_SEARCH) -> Iterator[Poly]:
    """Monic irreducibles over F_b in (degree, digit-encoding) order.

    Starts with x, then x+1, ... for degree 1.
    """
    _require_prime(b)
    for d in range(1, max_degree + 1):
        for tail in range(b**d):
            p = Poly(b, tuple(digits(tail, b, d)) + (1,))
            if p.is_irreducible():
                yield p


# ---------------------------------------------------------------------------
# truncated Laurent series


@dataclass(frozen=True)
class LaurentPrefix:
    """Coefficients a_1..a_m of x^-1..x^-m in a series over F_b."""

    b: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        _require_prime(self.b)
        if any(not 0 <= c < self.b for c in self.coeffs):
            raise ParameterError("Laurent coefficients must lie in 0..b-1")

    @property
    def m(self) -> int:
        return len(self.coeffs)

    def fractional_part(self, depth: int | None = None) -> Fraction:
        """{g}_{b,depth}: the digits read as a base-b fraction."""
        cs = self.coeffs if depth is None else self.coeffs[:depth]
        num = 0
        for c in cs:
            num = num * self.b + c
        return Fraction(num, self.b ** len(cs))


def laurent_expand(q, p, m: int, b: int | None = None) -> LaurentPrefix:
    """First m coefficients of the fractional part of q/p in F_b((x^-1)).

    The polynomial part is discarded (q is reduced mod p first).
    """
    p = as_poly(p, b)
    q = as_poly(q, p.b)
    if p.is_zero():
        raise ZeroDivisionError("Laurent expansion with p = 0")
    if m < 0:
        raise ParameterError("depth m must be nonnegative")
    bb = p.b
    d = p.degree
    r = list((q % p).coeffs) + [0] * (d + 1)
    r = r[: d + 1]
    inv_lead = pow(p.coeffs[-1], -1, bb)
    pc = list(p.coeffs)
    out = []
    for _ in range(m):
        # r <- x*r ; extract coefficient of x^d ; subtract a*p
        r = [0] + r[:d]
        a = r[d] * inv_lead % bb
        out.append(a)
        if a:
            for i in range(d + 1):
                r[i] = (r[i] - a * pc[i]) % bb
    return LaurentPrefix(bb, tuple(out))


# ---------------------------------------------------------------------------
# Bernoulli polynomials


@lru_cache(maxsize=None)
def bernoulli_numbers(n: int) -> tuple[Fraction, ...]:
    """B_0..B_n with the convention B_1 = -1/2."""
    B = [Fraction(1)]
    for k in range(1, n + 1):
        acc = Fraction(0)
        for j in range(k):
            acc += math.comb(k + 1, j) * B[j]
        B.append(-acc / (k + 1))
    return tuple(B)


@lru_cache(maxsize=None)
def bernoulli_coefficients(ell: int) -> tuple[Fraction, ...]:
    """Coefficients of B_ell(x) in ascending powers of x."""
    if ell < 0:
        raise ParameterError("Bernoulli degree must be nonnegative")
    B = bernoulli_numbers(ell)
    # B_ell(x) = sum_k C(ell,k) B_k x^(ell-k)
    return tuple(math.comb(ell, ell - i) * B[ell - i] for i in range(ell + 1))


def bernoulli(ell: int, x):
    """Bernoulli polynomial B_ell(x).

    Exact (Fraction) for int/Fraction input, float otherwise.  Arrays are
    evaluated elementwise in float.
    """
    coeffs = bernoulli_coefficients(ell)
    if isinstance(x, (int, Fraction)):
        acc = Fraction(0)
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc
    fc = [float(c) for c in coeffs]
    acc = 0.0 * x
    for c in reversed(fc):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# characters and Gauss sums


def root_of_unity(r: int, b: int) -> complex:
    """exp(2 pi i r / b), exact for the real cases 1 and -1."""
    r %= b
    if r == 0:
        return 1 + 0j
    if 2 * r == b:
        return -1 + 0j
    return cmath.exp(2j * math.pi * r / b)


def additive_character_sum(b: int, t: int) -> complex:
    """sum_{c in F_b} psi_t(c); zero for nontrivial psi."""
    _require_prime(b)
    return sum(root_of_unity(t * c, b) for c in range(b))


def _discrete_log_table(b: int) -> list[int]:
    w = primitive_root(b)
    table = [0] * b
    x = 1
    for k in range(b - 1):
        table[x] = k
        x = x * w % b
    return table


def gauss_sum_type1(b: int, chi_exponent: int, psi_multiplier: int) -> complex:
    """G(chi, psi) = sum_{c != 0} chi(c) psi(c).

    chi(w^k) = exp(2 pi i e k/(b-1)) for the smallest primitive root w and
    psi(c) = exp(2 pi i t c / b).
    """
    _require_prime(b)
    log = _discrete_log_table(b)
    e, t = chi_exponent, psi_multiplier
    total = 0j
    for c in range(1, b):
        # combine both phases as one rational angle to keep rounding small
        num = (e * log[c] * b + t * c * (b - 1)) % (b * (b - 1))
        total += root_of_unity(num, b * (b - 1))
    return total


def gauss_sum_type2(b: int, n: int, psi_multiplier: int) -> complex:
    """S_n(psi) = sum_{c != 0} psi(c^n) for n dividing b-1."""
    _require_prime(b)
    if n < 1 or (b - 1) % n:
        raise ParameterError(f"n={n} must divide b-1={b - 1}")
    if psi_multiplier % b == 0:
        raise ParameterError("psi must be nontrivial")
    return sum(root_of_unity(psi_multiplier * pow(c, n, b), b) for c in range(1, b))
