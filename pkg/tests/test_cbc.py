import itertools

import numpy as np
import pytest

from qmckit.cbc import (
    average_bound_holds,
    average_wce2,
    cbc_fast,
    cbc_naive,
    circulant_matvec,
    fft,
    ifft,
    rader_plan,
    select_candidate,
)
from qmckit.errors import ParameterError
from qmckit.kernels import korobov_average_bound, wce_korobov_closed
from qmckit.numtheory import is_prime
from qmckit.pointsets import LatticeRule


def test_fft_matches_numpy():
    rng = np.random.default_rng(0)
    for L in (1, 2, 3, 5, 8, 12, 16, 17, 96, 100, 257, 1000):
        a = rng.normal(size=L) + 1j * rng.normal(size=L)
        np.testing.assert_allclose(fft(a), np.fft.fft(a), rtol=0, atol=1e-9 * max(1, L))
        np.testing.assert_allclose(ifft(fft(a)), a, atol=1e-12 * max(1, L))


def test_circulant_examples():
    np.testing.assert_allclose(circulant_matvec([1, 2, 3], [1, 0, 0]), [1, 3, 2], atol=1e-12)
    np.testing.assert_allclose(circulant_matvec([1, 2, 3], [1, 1, 1]), [6, 6, 6], atol=1e-12)


@pytest.mark.parametrize("L", [4, 6, 10, 96])
def test_circulant_matches_dense(L):
    rng = np.random.default_rng(L)
    r, x = rng.normal(size=L), rng.normal(size=L)
    C = np.array([[r[(l - k) % L] for l in range(L)] for k in range(L)])
    np.testing.assert_allclose(circulant_matvec(r, x), C @ x, atol=1e-11)


def test_rader_example():
    plan = rader_plan(5)
    assert plan.root == 2
    D = plan.conjugate(np.arange(5))
    assert list(D[0]) == [1, 3, 4, 2]


@pytest.mark.parametrize("N", [p for p in range(3, 32) if is_prime(p)])
def test_rader_conjugate_is_circulant(N):
    plan = rader_plan(N)
    omega = np.random.default_rng(N).normal(size=N)
    D = plan.conjugate(omega)
    L = N - 1
    for k in range(L):
        for l in range(L):
            assert D[k, l] == D[(k - l) % L, 0]
    assert sorted(plan.forward.tolist()) == list(range(1, N))


def test_select_candidate_tie_break():
    assert select_candidate(np.array([2.0, 1.0, 1.0 + 1e-12, 3.0])) == 1
    assert select_candidate(np.array([1.0 + 5e-10, 1.0])) == 0
    assert select_candidate(np.array([1.0 + 5e-9, 1.0])) == 1


def test_cbc_small_examples():
    assert cbc_naive(5, 1, 1).g == (1,)
    assert cbc_fast(5, 1, 1).g == (1,)
    assert cbc_fast(17, 3, 1).g == cbc_naive(17, 3, 1).g


def test_cbc_matches_brute_force_protocol():
    N, alpha = 5, 1
    g1 = min(range(1, N), key=lambda a: (round(wce_korobov_closed(LatticeRule(N, (a,)), alpha), 9), a))
    g2 = min(range(1, N), key=lambda a: (round(wce_korobov_closed(LatticeRule(N, (g1, a)), alpha), 9), a))
    assert cbc_naive(N, 2, alpha).g == (g1, g2)


@pytest.mark.parametrize("N", [p for p in range(3, 140) if is_prime(p)])
@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_fast_equals_naive(N, alpha):
    a = cbc_naive(N, 4, alpha, keep_scores=True)
    b = cbc_fast(N, 4, alpha, keep_scores=True)
    assert a.g == b.g
    np.testing.assert_allclose(a.wce2, b.wce2, rtol=1e-9, atol=1e-12)
    for sa, sb in zip(a.scores, b.scores):
        np.testing.assert_allclose(sa, sb, atol=1e-10)


def test_fast_equals_naive_large():
    assert cbc_fast(257, 5, 2).g == cbc_naive(257, 5, 2).g


def test_reported_wce_matches_closed_form():
    res = cbc_fast(61, 4, 2)
    for d in range(1, 5):
        want = wce_korobov_closed(LatticeRule(61, res.g[:d]), 2)
        assert res.wce2[d - 1] == pytest.approx(want, rel=1e-10, abs=1e-14)


@pytest.mark.parametrize("N", [p for p in range(3, 102) if is_prime(p)])
def test_cbc_below_average_bound(N):
    for alpha in (1, 2):
        res = cbc_fast(N, 4, alpha)
        for d, e in enumerate(res.wce2, start=1):
            assert e <= korobov_average_bound(N, d, alpha)


@pytest.mark.parametrize("N", [3, 5, 7, 11, 13])
def test_average_bound_exhaustive(N):
    for s in (1, 2):
        ok, mean, bound = average_bound_holds(N, s, 1)
        assert ok
        brute = np.mean([wce_korobov_closed(LatticeRule(N, g), 1) for g in itertools.product(range(1, N), repeat=s)])
        assert mean == pytest.approx(brute, abs=1e-10)


def test_cbc_parameter_errors():
    with pytest.raises(ParameterError):
        cbc_fast(15, 2, 1)
    with pytest.raises(ParameterError):
        cbc_naive(7, 0, 1)
    with pytest.raises(ParameterError):
        cbc_fast(7, 2, 4)
    with pytest.raises(ParameterError):
        average_wce2(101, 4, 1)
