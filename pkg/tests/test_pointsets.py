import math
import warnings
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qmckit.errors import CapacityError, DegenerateOrbitError, ParameterError
from qmckit.numtheory import multiplicative_order
from qmckit.pointsets import (
    LatticeRule,
    LcgParams,
    NonCoprimeBasesWarning,
    PointSet,
    extensible_lattice,
    halton,
    hammersley,
    kronecker,
    lcg_pointset,
    rank1_lattice,
    symmetrized_hammersley,
    van_der_corput,
)


def col(P, j=0):
    return [r[j] for r in P.exact]


def test_van_der_corput_examples():
    assert col(van_der_corput(2, 4)) == [0, F(1, 2), F(1, 4), F(3, 4)]
    assert col(van_der_corput(3, 3)) == [0, F(1, 3), F(2, 3)]
    assert col(van_der_corput(2, 1)) == [0]


def test_halton_examples():
    assert halton((2, 3), 2).exact == [(0, 0), (F(1, 2), F(1, 3))]
    assert halton((2, 3), 4).exact[3] == (F(3, 4), F(1, 9))
    with pytest.warns(NonCoprimeBasesWarning):
        halton((2, 4), 4)


def test_hammersley_examples():
    assert hammersley((2,), 2).exact == [(0, 0), (F(1, 2), F(1, 2))]
    assert hammersley((2,), 4).exact == [(0, 0), (F(1, 4), F(1, 2)), (F(1, 2), F(1, 4)), (F(3, 4), F(3, 4))]
    assert col(hammersley((), 3)) == [0, F(1, 3), F(2, 3)]


def test_symmetrized_hammersley_examples():
    assert symmetrized_hammersley(1).exact == [(0, F(1, 2)), (F(1, 2), 0)]
    assert symmetrized_hammersley(2).exact == [(0, F(1, 2)), (F(1, 4), 0), (F(1, 2), F(3, 4)), (F(3, 4), F(1, 4))]


@pytest.mark.parametrize("n", range(1, 9))
def test_symmetrized_hammersley_structure(n):
    P = symmetrized_hammersley(n)
    N = 2**n
    assert P.N == N and P.dyadic_exponent() <= n
    assert all((v * N).denominator == 1 for r in P.exact for v in r)
    # each coordinate is a permutation of the grid k / N
    assert sorted(col(P, 0)) == [F(k, N) for k in range(N)]
    assert sorted(col(P, 1)) == [F(k, N) for k in range(N)]


def test_symmetrized_hammersley_guard():
    with pytest.raises(CapacityError):
        symmetrized_hammersley(31)


def test_rank1_lattice_examples():
    assert rank1_lattice(LatticeRule(2, (1, 1))).exact == [(0, 0), (F(1, 2), F(1, 2))]
    P = rank1_lattice(LatticeRule(5, (1, 2)))
    np.testing.assert_allclose(P.coords, [[0, 0], [0.2, 0.4], [0.4, 0.8], [0.6, 0.2], [0.8, 0.6]])
    Z = rank1_lattice(LatticeRule(7, (0, 0, 0)))
    assert Z.N == 7 and not Z.coords.any()


def test_lattice_rule_reduces_and_tests_duality():
    rule = LatticeRule(5, (6, -3))
    assert rule.g == (1, 2)
    assert rule.is_dual((1, 2)) and not rule.is_dual((1, 0))
    with pytest.raises(ParameterError):
        LatticeRule(0, (1,))


def test_kronecker_examples():
    np.testing.assert_allclose(kronecker([math.sqrt(2)], 3).coords[:, 0], [0, 0.41421356237309515, 0.8284271247461903], atol=1e-12)
    np.testing.assert_array_equal(kronecker([0.5], 4).coords[:, 0], [0, 0.5, 0, 0.5])
    np.testing.assert_array_equal(kronecker([0.0], 2).coords[:, 0], [0, 0])


@given(st.lists(st.floats(0, 10, allow_nan=False), min_size=1, max_size=4), st.integers(1, 200))
def test_kronecker_in_unit_cube(alpha, N):
    X = kronecker(alpha, N).coords
    assert X.shape == (N, len(alpha))
    assert np.all((X >= 0) & (X < 1))


def test_extensible_lattice_examples():
    P = extensible_lattice([(1, 0, 1)], 2, 2)
    assert sorted(col(P)) == [0, F(1, 4), F(1, 2), F(3, 4)]
    assert sorted(col(P)) == sorted(col(rank1_lattice(LatticeRule(4, (1,)))))
    assert all(v == 0 for v in col(extensible_lattice([(0, 0, 0)], 2, 3)))


@given(st.sampled_from([2, 3]), st.integers(1, 5), st.data())
def test_extensible_lattice_nested(b, m, data):
    a = [data.draw(st.lists(st.integers(0, b - 1), min_size=m + 1, max_size=m + 1)) for _ in range(2)]
    small = extensible_lattice(a, b, m).exact
    big = extensible_lattice(a, b, m + 1).exact
    assert big[: len(small)] == small
    assert set(small) <= set(big)


def test_lcg_examples():
    P, T = lcg_pointset(LcgParams(7, 3))
    assert T == 6 and col(P) == [F(v, 7) for v in (1, 3, 2, 6, 4, 5)]
    P, T = lcg_pointset(LcgParams(5, 4))
    assert T == 2 == multiplicative_order(4, 5)
    P, T = lcg_pointset(LcgParams(5, 2, 3, 1))
    assert len(set(col(P))) == T == P.N


def test_lcg_degenerate_and_bad_params():
    with pytest.raises(DegenerateOrbitError):
        lcg_pointset(LcgParams(7, 3, c=5, x0=1))  # 3*1 + 5 = 1 mod 7
    with pytest.raises(ParameterError):
        LcgParams(8, 3)
    with pytest.raises(ParameterError):
        LcgParams(7, 1)


def test_pointset_projection_and_sorting():
    P = hammersley((2,), 4)
    Q = P.project([1])
    assert Q.s == 1 and col(Q) == col(P, 1)
    assert P.sorted_rows()[0] == (0, 0)
    assert PointSet(np.array([0.5, 0.25])).s == 1


def test_halton_coprime_no_warning():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        halton((2, 3, 5), 10)
