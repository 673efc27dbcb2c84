"""Exact simplex, GF(2) routines and double description against independent oracles."""

from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from scipy.optimize import linprog

from qcpseudo import gf2
from qcpseudo.codes import QcCode
from qcpseudo.cone import ConeSystem, build_cone, code_cone, cone_contains
from qcpseudo.dd import enumerate_extreme_rays, exact_rank, validate_rays
from qcpseudo.errors import GuardExceeded
from qcpseudo.fixtures import ex11_qc
from qcpseudo.simplex import solve_lp


def test_simplex_small():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    res = solve_lp([1, 1], [[1, 2], [3, 1]], [4, 6], maximize=True)
    assert res.ok and res.value == Fraction(14, 5) and res.x == [Fraction(8, 5), Fraction(6, 5)]


def test_simplex_infeasible_unbounded():
    assert solve_lp([1], [[1]], [-1]).status == "infeasible"
    assert solve_lp([-1], [[-1]], [0]).status == "unbounded"


def test_simplex_equality():
    res = solve_lp([1, 2, 3], None, None, [[1, 1, 1]], [1])
    assert res.ok and res.value == 1 and res.x == [1, 0, 0]


@pytest.mark.parametrize("seed", range(25))
def test_simplex_matches_highs(seed):
    rng = np.random.default_rng(seed)
    m, n = rng.integers(2, 7), rng.integers(2, 7)
    A = rng.integers(-3, 5, size=(m, n))
    b = rng.integers(0, 9, size=m)
    c = rng.integers(-5, 5, size=n)
    ours = solve_lp(c.tolist(), A.tolist(), b.tolist())
    ref = linprog(c, A_ub=A, b_ub=b, bounds=[(0, None)] * n, method="highs")
    if ref.status == 3:
        assert ours.status == "unbounded"
    else:
        assert ours.ok and float(ours.value) == pytest.approx(ref.fun, abs=1e-7)
        x = ours.x
        assert all(v >= 0 for v in x)
        assert all(sum(int(a) * v for a, v in zip(row, x)) <= int(bb) for row, bb in zip(A, b))


def test_gf2_nullspace_and_rank():
    H = QcCode(ex11_qc(5)).H
    N = gf2.nullspace(H)
    assert N.shape == (7, 20) and gf2.rank(H) == 13
    assert not ((N.astype(int) @ H.T.astype(int)) % 2).any()
    assert gf2.rank(N) == 7


def test_min_weight_word_bruteforce():
    H = QcCode(ex11_qc(4)).H
    N = gf2.nullspace(H)
    best = min(int(((np.array(c) @ N) % 2).sum()) for c in product([0, 1], repeat=N.shape[0]) if any(c))
    w, word = gf2.min_weight_word(N)
    assert w == best and word.sum() == w


def test_min_weight_capped_matches():
    H = QcCode(ex11_qc(6)).H
    w_full, _ = gf2.min_weight_word(gf2.nullspace(H))
    w_cap, word = gf2.min_weight_capped(H, w_full)
    assert w_cap == w_full and not gf2.syndrome(H, word).any()


def test_exact_rank():
    assert exact_rank([[1, 2], [2, 4]]) == 1
    assert exact_rank(np.eye(4, dtype=int)) == 4


def test_rays_single_check():
    rays = enumerate_extreme_rays(build_cone(np.array([[1, 1, 1]])))
    assert sorted(map(tuple, rays.rays.tolist())) == [(0, 1, 1), (1, 0, 1), (1, 1, 0)]
    assert validate_rays(rays)


def test_rays_orthant():
    sys = ConeSystem(2, np.eye(2, dtype=np.int64), (("nonneg", 0), ("nonneg", 1)), ())
    assert sorted(map(tuple, enumerate_extreme_rays(sys).rays.tolist())) == [(0, 1), (1, 0)]


def test_rays_r1_r2():
    r1 = enumerate_extreme_rays(code_cone(QcCode(ex11_qc(1))))
    assert len(r1) == 6 and validate_rays(r1)
    r2 = enumerate_extreme_rays(code_cone(QcCode(ex11_qc(2))))
    assert validate_rays(r2)
    for ray in r2:
        assert cone_contains(code_cone(QcCode(ex11_qc(2))), ray.tolist())


def test_ray_guards():
    with pytest.raises(GuardExceeded):
        enumerate_extreme_rays(code_cone(QcCode(ex11_qc(7))))
    with pytest.raises(GuardExceeded):
        enumerate_extreme_rays(code_cone(QcCode(ex11_qc(3))), max_rays=50)


def test_rays_random_members_never_beat_minimum():
    sys = code_cone(QcCode(ex11_qc(2)))
    rays = enumerate_extreme_rays(sys).rays
    from qcpseudo.weights import weight_report
    best = min(weight_report(r.tolist()).awgnc for r in rays)
    rng = np.random.default_rng(0)
    for _ in range(200):
        v = rng.random(len(rays)) @ rays
        assert weight_report(v.tolist()).awgnc >= float(best) - 1e-9
