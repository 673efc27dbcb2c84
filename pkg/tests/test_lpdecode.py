from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from qcpseudo import gf2
from qcpseudo.codes import QcCode, is_codeword
from qcpseudo.cone import build_polytope
from qcpseudo.fixtures import ex11_qc
from qcpseudo.lpdecode import (boundary_experiment, ebn0_db, lambda_alpha_beta, lp_decode, parse_alpha_grid,
                               polytope_scale, rationalize_llr)

H3 = np.array([[1, 1, 1]])
H20 = QcCode(ex11_qc(5)).H


def test_all_positive_gives_zero():
    res = lp_decode(H3, [1, 1, 1])
    assert res.is_zero and res.integral and res.objective == 0


def test_lexicographic_tie_rule():
    res = lp_decode(H3, [-3, 1, 1])
    assert res.omega == [1, 0, 1] and res.integral and res.objective == -2
    assert res.tie_broken


def test_length_mismatch_and_nonfinite():
    with pytest.raises(ValueError):
        lp_decode(H3, [1, 1])
    with pytest.raises(ValueError):
        lp_decode(H3, [1.0, float("nan"), 1.0])


def test_rationalize_text_and_float():
    assert rationalize_llr(["0.1", 2, 0.25]) == [Fraction(1, 10), 2, Fraction(1, 4)]
    assert rationalize_llr([0.1]) == [Fraction(1, 10)]
    assert rationalize_llr([1 / 3], precision=10) == [Fraction(1, 3)]


def test_two_flips_on_length20_code():
    rng = np.random.default_rng(1)
    P = build_polytope(H20)
    for _ in range(40):
        lam = np.ones(20, dtype=int)
        lam[rng.choice(20, size=2, replace=False)] = -1
        res = lp_decode(H20, lam, polytope=P)
        assert res.is_zero and res.integral


def test_ml_agreement_when_integral():
    N = gf2.nullspace(H20)
    words = np.array([(np.array(c) @ N) % 2 for c in product([0, 1], repeat=N.shape[0])])
    P = build_polytope(H20)
    rng = np.random.default_rng(2)
    integral = 0
    for _ in range(500):
        lam = [Fraction(int(v), 1000) for v in np.round((1 + rng.normal(0, 0.9, 20)) * 1000)]
        res = lp_decode(H20, lam, polytope=P)
        assert res.objective <= 0
        if res.integral:
            integral += 1
            hard = res.hard
            assert is_codeword(H20, hard)
            costs = [sum(l * int(b) for l, b in zip(lam, w)) for w in words]
            assert res.objective == min(costs)
    assert integral > 400


def test_lambda_alpha_beta():
    assert lambda_alpha_beta([1, 1, 0], 0, 3) == [3, 3, 3]
    lam = lambda_alpha_beta([1, 1, 0], Fraction(1, 2), 1)
    assert sum(l * w for l, w in zip(lam, [1, 1, 0])) == 0
    with pytest.raises(ValueError):
        lambda_alpha_beta([0, 0], 0.5, 1)
    with pytest.raises(ValueError):
        lambda_alpha_beta([1, 0], 0.5, 0)


def test_ebn0_mapping():
    assert ebn0_db(1.0, 0.4) == pytest.approx(-2.04, abs=0.01)


def test_boundary_single_check():
    rep = boundary_experiment(H3, [1, 1, 0], [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
    assert [r.winner for r in rep.rows] == ["zero", "tie", "pseudocodeword"]
    assert rep.flips_at_half and rep.globally_consistent
    assert rep.rows[1].objective == 0 and rep.rows[0].lp_objective == 0
    assert rep.rows[2].lp_objective < 0


def test_polytope_scale():
    P = build_polytope(H3)
    assert polytope_scale(P, [1, 1, 0]) == 1
    assert polytope_scale(P, [2, 2, 0]) == Fraction(1, 2)


def test_alpha_grid():
    assert parse_alpha_grid("0:1:0.25") == [0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1]
    assert parse_alpha_grid("0.1,0.5") == [Fraction(1, 10), Fraction(1, 2)]
    with pytest.raises(ValueError):
        parse_alpha_grid("0:1:0")
