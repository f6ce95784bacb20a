import math
from fractions import Fraction as F

import numpy as np
import pytest

from qmckit.discrepancy import l2_discrepancy, l2_star_discrepancy
from qmckit.errors import ParameterError
from qmckit.haar import (
    HaarIndex,
    counting_part_1d,
    haar_coefficient,
    haar_function,
    haar_norm_sq,
    l2_via_parseval,
    volume_coefficient,
)
from qmckit.pointsets import PointSet, hammersley, symmetrized_hammersley, van_der_corput


def mu(P, j, m):
    return haar_coefficient(P, HaarIndex(j, m), exact=True)


def positions(j):
    return range(1 if j == -1 else 2**j)


def test_index_validation():
    with pytest.raises(ParameterError):
        HaarIndex((-2,), (0,))
    with pytest.raises(ParameterError):
        HaarIndex((1,), (2,))


def test_volume_part_example():
    v = haar_coefficient(PointSet.from_exact([(F(1, 2),)], 1), HaarIndex((0,), (0,)), part="volume")
    assert abs(v) == F(1, 4)
    # one factor 4^-(j_i + 1) per coordinate
    assert abs(volume_coefficient((0, 1))) == F(1, 2 ** (2 * (0 + 1 + 2)))


def test_counting_part_outside_support():
    assert counting_part_1d(F(9, 10), 1, 0) == 0


def test_counting_part_is_tail_integral():
    # F(z) = int_z^1 h(t) dt, checked against a fine midpoint rule
    for j, m in [(-1, 0), (0, 0), (2, 1), (3, 5)]:
        for z in (0.0, 0.1, 0.37, 0.5, 0.8):
            t = z + (1 - z) * (np.arange(4000) + 0.5) / 4000
            h = np.array([haar_function(HaarIndex((j,), (m,)), [v]) for v in t])
            approx = np.mean(h) * (1 - z)
            assert float(counting_part_1d(z, j, m)) == pytest.approx(approx, abs=2e-3)


def test_symmetrized_hammersley_coefficient_example():
    P = symmetrized_hammersley(3)
    assert abs(mu(P, (0, 0), (0, 0))) == F(1, 2 ** (2 * 4))


@pytest.mark.parametrize("n", range(2, 5))
def test_coefficient_size_clauses(n):
    P = symmetrized_hammersley(n)
    quarter = lambda e: F(1, 4**e)  # noqa: E731
    for j1 in range(0, n + 2):
        for j2 in range(0, n + 2):
            vals = [abs(mu(P, (j1, j2), (m1, m2))) for m1 in positions(j1) for m2 in positions(j2)]
            if j1 >= n or j2 >= n:
                assert all(v == quarter(j1 + j2 + 2) for v in vals)
            elif j1 + j2 < n - 1:
                assert all(v == quarter(n + 1) for v in vals)
            else:
                assert max(vals) <= F(1, 2 ** (n + j1 + j2 + 1))
                assert sum(v != quarter(j1 + j2 + 2) for v in vals) <= 2**n
    for k in range(0, n + 2):
        for j in ((-1, k), (k, -1)):
            vals = [abs(mu(P, j, (m1, m2))) for m1 in positions(j[0]) for m2 in positions(j[1])]
            if k < n:
                assert max(vals) <= F(1, 2 ** (n + k))
            else:
                assert all(v == F(1, 2 ** (2 * k + 3)) for v in vals)
    a = 4 if n % 2 == 0 else 3
    assert abs(mu(P, (-1, -1), (0, 0))) == a * F(1, 2 ** (n + 3)) + quarter(n + 1)


def test_haar_norm():
    assert haar_norm_sq((-1, 0, 3)) == F(1, 8)


@pytest.mark.parametrize("n", range(0, 7))
def test_parseval_equals_kernel_formula(n):
    P = symmetrized_hammersley(n) if n else PointSet.from_exact([(0, 0)], 2)
    res = l2_via_parseval(P)
    assert res.tail_exact
    assert float(res.value) == pytest.approx(l2_discrepancy(P) ** 2, abs=1e-12)
    pure = l2_via_parseval(P, projections=False)
    assert float(pure.value) == pytest.approx(l2_star_discrepancy(P) ** 2, abs=1e-12)


def test_parseval_examples():
    P = symmetrized_hammersley(2)
    assert float(l2_via_parseval(P).value) == pytest.approx(l2_discrepancy(P) ** 2, abs=1e-12)
    P4 = symmetrized_hammersley(4)
    assert math.sqrt(float(l2_via_parseval(P4).value)) == pytest.approx(l2_discrepancy(P4), abs=1e-10)


def test_parseval_partial_sums_monotone():
    P = hammersley((2,), 16)
    partials = [l2_via_parseval(P, max_level=L).partial for L in range(-1, 5)]
    assert all(a <= b for a, b in zip(partials, partials[1:]))
    full = l2_via_parseval(P).value
    assert all(p <= full for p in partials)


def test_parseval_float_path_matches_exact():
    P = van_der_corput(2, 16)
    exact = l2_via_parseval(P)
    approx = l2_via_parseval(P, exact=False)
    assert approx.value == pytest.approx(float(exact.value), abs=1e-14)


def test_parseval_non_dyadic_needs_level():
    P = PointSet(np.array([[0.3], [0.7]]))
    with pytest.raises(ParameterError):
        l2_via_parseval(P)
    deep = l2_via_parseval(P, max_level=12)
    assert deep.value == pytest.approx(l2_discrepancy(P) ** 2, abs=1e-4)


@pytest.mark.parametrize("j", [(-1, -1), (0, 2), (3, -1), (4, 4), (1, 3)])
def test_haar_level_matches_single_coefficients(j):
    from qmckit.haar import haar_level

    P = symmetrized_hammersley(3)
    level = haar_level(P, j)
    assert len(level) == 2 ** sum(max(v, 0) for v in j)
    for m, v in level.items():
        assert v == mu(P, j, m)
