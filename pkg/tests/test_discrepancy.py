import itertools
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmckit.discrepancy import (
    discrepancy_function,
    dual_lattice_enum,
    enhanced_trig_degree,
    etk_bound,
    exp_sum,
    l2_discrepancy,
    l2_star_discrepancy,
    lattice_etk_sum,
    lp_discrepancy_mc,
    minkowski_bound,
    star_discrepancy_exact,
)
from qmckit.errors import CapacityError, ParameterError
from qmckit.pointsets import LatticeRule, PointSet, halton, hammersley, rank1_lattice, symmetrized_hammersley


def pts(*rows):
    return PointSet(np.array(rows, dtype=float).reshape(len(rows), -1))


def brute_star(X):
    N, s = X.shape
    grids = [sorted(set(X[:, j].tolist()) | {1.0}) for j in range(s)]
    best = 0.0
    for y in itertools.product(*grids):
        y = np.array(y)
        vol = float(np.prod(y))
        closed = np.all(X <= y, axis=1).sum() / N
        opened = np.all(X < y, axis=1).sum() / N
        best = max(best, closed - vol, vol - opened)
    return best


def brute_l2_star(X, grid=400):
    # midpoint rule on the anchored-box integral, s <= 2
    N, s = X.shape
    t = (np.arange(grid) + 0.5) / grid
    Y = np.stack(np.meshgrid(*([t] * s), indexing="ij"), axis=-1).reshape(-1, s)
    D = np.all(X[None, :, :] < Y[:, None, :], axis=2).mean(axis=1) - np.prod(Y, axis=1)
    return math.sqrt(float(np.mean(D**2)))


def test_discrepancy_function_examples():
    P = pts([0.0], [0.5])
    assert discrepancy_function(P, [0.75]) == pytest.approx(0.25)
    assert discrepancy_function(P, [0.5]) == pytest.approx(0.0)
    assert discrepancy_function(P, [0.0]) == 0.0


def test_star_examples():
    assert star_discrepancy_exact(pts([0.5])) == pytest.approx(0.5)
    assert star_discrepancy_exact(pts([0.0])) == pytest.approx(1.0)
    assert star_discrepancy_exact(pts([0.25], [0.75])) == pytest.approx(0.25)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_star_matches_brute_force(s, N, seed):
    X = np.random.default_rng(seed).random((N, s))
    # snap some coordinates onto a coarse grid so ties between points occur
    X[: N // 2] = np.floor(X[: N // 2] * 4) / 4
    assert star_discrepancy_exact(PointSet(X)) == pytest.approx(brute_star(X), abs=1e-12)


def test_star_one_dimensional_closed_form():
    # D* of a sorted 1-d set is 1/(2N) + max |x_(i) - (2i-1)/(2N)|
    X = np.sort(np.random.default_rng(4).random(50))
    N = X.size
    want = 1 / (2 * N) + np.max(np.abs(X - (2 * np.arange(1, N + 1) - 1) / (2 * N)))
    assert star_discrepancy_exact(PointSet(X)) == pytest.approx(want, abs=1e-12)


def test_star_guard():
    X = np.random.default_rng(0).random((600, 3))
    with pytest.raises(CapacityError):
        star_discrepancy_exact(PointSet(X), guard=10**6)


def test_l2_examples():
    assert l2_discrepancy(pts([0.0])) == pytest.approx(1 / math.sqrt(3))
    assert l2_discrepancy(pts([1.0])) == pytest.approx(1 / math.sqrt(3))


@pytest.mark.parametrize("P", [hammersley((2,), 8), halton((2, 3), 10), rank1_lattice(LatticeRule(13, (1, 5)))])
def test_l2_star_against_quadrature(P):
    assert l2_star_discrepancy(P) == pytest.approx(brute_l2_star(P.coords), rel=2e-2)


def test_l2_is_sum_over_projections():
    P = halton((2, 3, 5), 12)
    total = 0.0
    for r in range(1, 4):
        for u in itertools.combinations(range(3), r):
            total += l2_star_discrepancy(P.project(u)) ** 2
    assert l2_discrepancy(P) ** 2 == pytest.approx(total, rel=1e-12)


def test_star_dominates_l2_star():
    for P in (hammersley((2,), 16), halton((2, 3), 20), symmetrized_hammersley(4)):
        assert star_discrepancy_exact(P) >= l2_star_discrepancy(P)


def test_lp_mc_examples():
    est = lp_discrepancy_mc(pts([0.0]), 2, 10**6, seed=7)
    assert abs(est.value - 1 / math.sqrt(3)) <= 3 * est.stderr
    one = lp_discrepancy_mc(pts([0.3]), 2, 1, seed=1)
    assert math.isfinite(one.value)


def test_lp_mc_agrees_with_exact_l2():
    X = np.random.default_rng(11).random((20, 2))
    P = PointSet(X)
    est = lp_discrepancy_mc(P, 2, 200_000, seed=3)
    assert abs(est.value - l2_discrepancy(P)) <= 3 * est.stderr
    pure = lp_discrepancy_mc(P, 2, 200_000, seed=3, projections=False)
    assert abs(pure.value - l2_star_discrepancy(P)) <= 3 * pure.stderr


def test_lp_mc_is_seeded():
    P = halton((2, 3), 8)
    assert lp_discrepancy_mc(P, 3, 5000, seed=9) == lp_discrepancy_mc(P, 3, 5000, seed=9)


def test_exp_sum_examples():
    P = rank1_lattice(LatticeRule(5, (1, 2)))
    assert exp_sum(P, (1, 2)) == pytest.approx(5)
    assert abs(exp_sum(P, (1, 0))) < 1e-12
    assert exp_sum(P, (0, 0)) == 5


def test_exp_sum_float_points():
    X = np.random.default_rng(2).random((7, 2))
    h = (3, -2)
    want = np.sum(np.exp(2j * np.pi * (X @ np.array(h))))
    assert exp_sum(PointSet(X), h) == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("N", [3, 5, 8, 13])
def test_etk_equidistant(N):
    P = PointSet.from_exact([(F(n, N),) for n in range(N)], 1)
    assert etk_bound(P, N - 1) == pytest.approx(1 / (N - 1), abs=1e-12)


def test_etk_lattice_sum_identity():
    rule = LatticeRule(31, (1, 12))
    P = rank1_lattice(rule)
    for m in (3, 10, 31):
        assert etk_bound(P, m) - 1 / m == pytest.approx(lattice_etk_sum(rule, m), abs=1e-10)


def test_dual_enum_examples():
    d = dual_lattice_enum(LatticeRule(5, (1, 2)), 3)
    assert (1, 2) in d and (2, -1) in d
    d = dual_lattice_enum(LatticeRule(2, (1, 1)), 2)
    for h in [(1, 1), (1, -1), (2, 0), (0, 2)]:
        assert h in d
    assert dual_lattice_enum(LatticeRule(5, (1, 2)), 0) == []


@settings(max_examples=40)
@given(st.integers(2, 40), st.integers(1, 3), st.integers(0, 4), st.sampled_from(["l1", "sup"]), st.data())
def test_dual_enum_brute_force(N, s, bound, norm, data):
    g = tuple(data.draw(st.integers(0, N - 1)) for _ in range(s))
    rule = LatticeRule(N, g)
    want = []
    for h in itertools.product(range(-bound, bound + 1), repeat=s):
        size = sum(map(abs, h)) if norm == "l1" else max(map(abs, h))
        if any(h) and size <= bound and sum(a * b for a, b in zip(h, g)) % N == 0:
            want.append(h)
    assert dual_lattice_enum(rule, bound, norm) == sorted(want)


def test_trig_degree_examples():
    assert enhanced_trig_degree(LatticeRule(5, (1, 2))) == 3
    assert enhanced_trig_degree(LatticeRule(2, (1, 1))) == 2
    assert enhanced_trig_degree(LatticeRule(9, (0, 4))) == 1


@pytest.mark.parametrize("seed", range(15))
def test_trig_degree_brute_force_and_bound(seed):
    rng = random.Random(seed)
    s = rng.choice([2, 3])
    N = rng.randint(2, 60)
    rule = LatticeRule(N, tuple(rng.randrange(N) for _ in range(s)))
    rho = enhanced_trig_degree(rule)
    best = min(
        sum(map(abs, h))
        for h in itertools.product(range(-N, N + 1), repeat=s)
        if any(h) and sum(a * b for a, b in zip(h, rule.g)) % N == 0
    )
    assert rho == best
    assert rho <= minkowski_bound(s, N)


def test_minkowski_bound_values():
    assert minkowski_bound(2, 5) == 4  # ceil(sqrt(10))
    assert minkowski_bound(3, 100) == math.ceil((6 * 100) ** (1 / 3))
    with pytest.raises(ParameterError):
        minkowski_bound(0, 5)
