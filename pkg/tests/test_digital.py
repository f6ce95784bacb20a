import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmckit.digital import (
    GeneratingMatrices,
    digital_kronecker,
    digital_net,
    dual_net,
    hankel_matrices,
    net_character_sum,
    niederreiter_matrices,
    nullspace_mod,
    polynomial_lattice,
    rank_mod,
    walsh,
    walsh_multi,
)
from qmckit.errors import CapacityError, ParameterError, RepresentationError
from qmckit.numtheory import LaurentPrefix, Poly, laurent_expand
from qmckit.pointsets import van_der_corput


def gm(b, *mats):
    return GeneratingMatrices(b, tuple(np.array(M) for M in mats))


def random_gen(rng, b, m, s):
    return gm(b, *[[[rng.randrange(b) for _ in range(m)] for _ in range(m)] for _ in range(s)])


def test_digital_net_examples():
    assert digital_net(gm(2, [[1]], [[1]])).exact == [(0, 0), (F(1, 2), F(1, 2))]
    P = digital_net(gm(2, np.eye(2, dtype=int), [[1, 1], [0, 1]]))
    assert [r[0] for r in P.exact] == [r[0] for r in van_der_corput(2, 4).exact]
    Z = digital_net(gm(3, np.zeros((2, 2), dtype=int)))
    assert Z.N == 9 and all(v == 0 for r in Z.exact for v in r)


def test_generating_matrices_validation():
    with pytest.raises(ParameterError):
        gm(4, [[1]])
    with pytest.raises(ParameterError):
        gm(2, [[2]])
    with pytest.raises(ParameterError):
        gm(2, [[1]], [[1, 0], [0, 1]])


def test_polynomial_lattice_examples():
    x = Poly.x(2)
    assert sorted(r[0] for r in polynomial_lattice(x * x, [1], 2).exact) == [0, F(1, 4), F(1, 2), F(3, 4)]
    assert sorted(r[0] for r in polynomial_lattice(x, [1], 2).exact) == [0, F(1, 2)]
    assert all(v == 0 for r in polynomial_lattice(x * x, [0], 2).exact for v in r)


@settings(max_examples=40)
@given(st.sampled_from([2, 3]), st.integers(1, 4), st.data())
def test_polynomial_lattice_two_paths_agree(b, m, data):
    pc = [data.draw(st.integers(0, b - 1)) for _ in range(m)] + [1]
    p = Poly(b, tuple(pc))
    qs = [Poly(b, tuple(data.draw(st.integers(0, b - 1)) for _ in range(m))) for _ in range(2)]
    a = polynomial_lattice(p, qs, method="laurent")
    c = polynomial_lattice(p, qs, method="matrix")
    assert a.exact == c.exact


def test_digital_kronecker_examples():
    inv_x = LaurentPrefix(2, (1,) + (0,) * 9)
    assert [r[0] for r in digital_kronecker([inv_x], 4).exact] == [0, F(1, 2), 0, F(1, 2)]
    zero = LaurentPrefix(2, (0,) * 10)
    assert all(r[0] == 0 for r in digital_kronecker([zero], 8).exact)


@pytest.mark.parametrize("n_points", [1, 5, 16, 37])
def test_digital_kronecker_matches_hankel_sequence(n_points):
    f = laurent_expand(1, Poly(2, (1, 1)), 20)
    g = laurent_expand(Poly(3, (1, 2)), Poly(3, (2, 0, 1)), 20)
    for fs in ([f], [g]):
        a = digital_kronecker(fs, n_points, method="laurent")
        c = digital_kronecker(fs, n_points, method="matrix")
        assert a.exact == c.exact


def test_digital_kronecker_precision_guard():
    f = LaurentPrefix(2, (1, 0, 1))
    with pytest.raises(CapacityError):
        digital_kronecker([f], 16, precision=3)


def test_hankel_structure():
    f = LaurentPrefix(2, (1, 0, 1, 1, 0, 1))
    C = hankel_matrices([f], 3, 4).matrices[0]
    for k in range(4):
        for i in range(3):
            assert C[k, i] == f.coeffs[k + i]


def test_niederreiter_examples():
    assert np.array_equal(niederreiter_matrices(2, 1, 3).matrices[0], np.eye(3, dtype=int))
    assert np.array_equal(niederreiter_matrices(3, 1, 2).matrices[0], np.eye(2, dtype=int))
    gen = niederreiter_matrices(2, 2, 2)
    assert rank_mod(gen.matrices[1], 2) == 2


@pytest.mark.parametrize("b,s,m", [(2, 3, 4), (3, 2, 3), (5, 2, 2)])
def test_niederreiter_rows_independent(b, s, m):
    for C in niederreiter_matrices(b, s, m).matrices:
        assert rank_mod(C, b) == m


def test_dual_net_examples():
    assert dual_net(gm(2, [[1]], [[1]])) == [(0, 0), (1, 1)]
    assert dual_net(gm(2, np.eye(3, dtype=int))) == [(0,)]


def _brute_dual(gen):
    b, m, s = gen.b, gen.m, gen.s
    out = []
    for k in itertools.product(range(b**m), repeat=s):
        acc = np.zeros(m, dtype=np.int64)
        for kj, C in zip(k, gen.matrices):
            d = np.array([(kj // b**i) % b for i in range(m)])
            acc += C.T @ d
        if not np.any(acc % b):
            out.append(k)
    return out


@pytest.mark.parametrize("seed", range(12))
def test_dual_net_brute_force_and_rank_nullity(seed):
    rng = random.Random(seed)
    b = rng.choice([2, 3])
    m = rng.randint(1, 3)
    s = rng.randint(1, 3 if b == 2 else 2)
    gen = random_gen(rng, b, m, s)
    d = dual_net(gen)
    assert d == _brute_dual(gen)
    A = np.concatenate([C.T for C in gen.matrices], axis=1)
    assert len(d) * b ** rank_mod(A, b) == b ** (m * s)
    assert nullspace_mod(A, b).shape[0] == m * s - rank_mod(A, b)


def test_walsh_examples():
    assert walsh(2, 1, F(1, 2)) == pytest.approx(-1)
    assert walsh(2, 3, F(1, 4)) == pytest.approx(-1)
    for x in (0, F(1, 2), F(3, 8)):
        assert walsh(2, 0, x) == 1
    with pytest.raises(RepresentationError):
        walsh(2, 1, F(1, 3))


def test_walsh_orthogonality():
    b, m = 3, 2
    grid = [F(i, b**m) for i in range(b**m)]
    for k in range(b**m):
        for ell in range(b**m):
            ip = sum(walsh(b, k, x) * walsh(b, ell, x).conjugate() for x in grid) / b**m
            assert ip == pytest.approx(1.0 if k == ell else 0.0, abs=1e-12)
    assert walsh_multi(2, (1, 1), (F(1, 2), F(1, 2))) == pytest.approx(1)


def test_net_character_sum_examples():
    net = digital_net(gm(2, [[1]], [[1]]))
    assert net_character_sum(net, (1, 1)) == 2
    assert net_character_sum(net, (1, 0)) == 0
    assert net_character_sum(net, (0, 0)) == 2


@pytest.mark.parametrize("seed", range(8))
def test_net_character_sum_dichotomy(seed):
    rng = random.Random(100 + seed)
    b = rng.choice([2, 3, 5])
    m = rng.randint(1, 2)
    gen = random_gen(rng, b, m, 2)
    net = digital_net(gen)
    dual = set(dual_net(gen))
    for k in itertools.product(range(b**m), repeat=2):
        got = net_character_sum(net, k)
        assert got == (net.N if k in dual else 0)
        direct = sum(walsh_multi(b, k, row) for row in net.exact)
        assert abs(direct - got) < 1e-9 * net.N
