from fractions import Fraction

import numpy as np
import pytest

from qcpseudo.codes import QcCode, is_codeword, truncated_check, unwrap
from qcpseudo.cone import code_cone
from qcpseudo.fixtures import ex11_qc
from qcpseudo.lpdecode import lambda_alpha_beta
from qcpseudo.mpi import (TannerGraph, decode_batch, min_sum_decode, sliding_window_decode, sum_product_decode,
                          window_matrix)
from qcpseudo.pseudoweights import min_maxfrac_lp

Q5 = QcCode(ex11_qc(5))
G5 = TannerGraph(Q5.H)
CONV = unwrap(Q5)


def test_tanner_graph_edges():
    H = np.array([[1, 1, 0], [0, 1, 1]])
    g = TannerGraph(H)
    assert g.edges == {(0, 0), (0, 1), (1, 1), (1, 2)}
    assert G5.edges == {(int(i), int(j)) for i, j in zip(*np.nonzero(Q5.H))}


@pytest.mark.parametrize("decode", [sum_product_decode, min_sum_decode])
def test_all_positive_one_iteration(decode):
    out = decode(G5, np.full(20, 5.0))
    assert out.converged and out.iterations == 1 and not out.hard.any()


@pytest.mark.parametrize("decode", [sum_product_decode, min_sum_decode])
def test_single_flips_corrected(decode):
    for pos in range(20):
        llr = np.ones(20)
        llr[pos] = -1.0
        out = decode(G5, llr, max_iter=50)
        assert out.converged and not out.hard.any(), pos


def test_converged_means_codeword():
    rng = np.random.default_rng(4)
    llr = 1 + rng.normal(0, 1.2, size=(200, 20))
    hard, _, done, _ = decode_batch(G5, llr, "sp")
    for h in hard[done]:
        assert is_codeword(Q5.H, h)


def test_batch_matches_single():
    rng = np.random.default_rng(5)
    llr = 1 + rng.normal(0, 1.0, size=(20, 20))
    hard, iters, done, _ = decode_batch(G5, llr, "ms", 30, np.inf)
    for k in range(20):
        one = min_sum_decode(G5, llr[k], max_iter=30)
        assert np.array_equal(one.hard, hard[k]) and one.iterations == iters[k] and one.converged == done[k]


def test_min_sum_scaling_exact():
    rng = np.random.default_rng(6)
    for _ in range(10):
        lam = [Fraction(int(v), 4) for v in rng.integers(-6, 12, size=20)]
        base = min_sum_decode(G5, lam, max_iter=20, exact_mode=True, record=True)
        for c in (Fraction(1, 7), 2, 3):
            scaled = min_sum_decode(G5, [c * v for v in lam], max_iter=20, exact_mode=True, record=True)
            assert scaled.iterations == base.iterations
            assert all(np.array_equal(a, b) for a, b in zip(base.trajectory, scaled.trajectory))


def test_min_sum_beta_invariance_float():
    ray = min_maxfrac_lp(code_cone(Q5)).witness.tolist()
    for a in (Fraction(1, 4), Fraction(3, 4)):
        o1 = min_sum_decode(G5, [float(v) for v in lambda_alpha_beta(ray, a, 1)], max_iter=200, record=True)
        o2 = min_sum_decode(G5, [float(v) for v in lambda_alpha_beta(ray, a, 2)], max_iter=200, record=True)
        assert o1.iterations == o2.iterations
        assert all(np.array_equal(x, y) for x, y in zip(o1.trajectory, o2.trajectory))


def test_min_sum_agrees_with_sum_product_high_magnitude():
    rng = np.random.default_rng(7)
    same = 0
    for _ in range(500):
        llr = rng.uniform(8, 12, size=20)
        llr[rng.integers(20)] *= -1
        a = sum_product_decode(G5, llr)
        b = min_sum_decode(G5, llr)
        same += np.array_equal(a.hard, b.hard) and a.converged == b.converged
    assert same >= 495


def test_alpha_beta_convergence():
    ray = min_maxfrac_lp(code_cone(Q5)).witness.tolist()
    for decode in (sum_product_decode, min_sum_decode):
        good = decode(G5, [float(v) for v in lambda_alpha_beta(ray, Fraction(1, 4), 3)], max_iter=1000)
        assert good.converged and not good.hard.any()
        bad = decode(G5, [float(v) for v in lambda_alpha_beta(ray, Fraction(3, 4), 3)], max_iter=1000,
                     record=True)
        assert not (bad.converged and not bad.hard.any())
    assert bad.oscillations > 0


def test_input_validation():
    with pytest.raises(ValueError):
        sum_product_decode(G5, np.ones(20), max_iter=0)
    with pytest.raises(ValueError):
        sum_product_decode(G5, [np.inf] + [1.0] * 19)
    with pytest.raises(ValueError):
        sum_product_decode(G5, np.ones(19))


def test_window_matrix_shapes():
    H, cs = window_matrix(CONV, 0, 5)
    assert cs == 0 and np.array_equal(H, truncated_check(CONV, 5, 5).realized)
    H, cs = window_matrix(CONV, 7, 5)
    assert cs == 7 - CONV.ms and H.shape == (5 * CONV.J, (5 + CONV.ms) * CONV.L)


def test_sliding_window_zero_stream():
    out = sliding_window_decode(CONV, np.full(12 * CONV.L, 3.0), W=CONV.ms + 1)
    assert not out.hard.any() and out.block_converged.all()


def test_sliding_window_single_errors():
    N, W = 12, 2 * (CONV.ms + 1)
    llr = np.full((N * CONV.L, N * CONV.L), 2.0)
    np.fill_diagonal(llr, -2.0)
    out = sliding_window_decode(CONV, llr, W)
    assert not out.hard.any()


def test_sliding_window_first_block_matches_truncated_block_decoder():
    W = 6
    rng = np.random.default_rng(8)
    llr = 1 + rng.normal(0, 0.8, size=(30, W * CONV.L))
    out = sliding_window_decode(CONV, llr, W)
    ref, _, _, _ = decode_batch(TannerGraph(truncated_check(CONV, W, W).realized), llr, "sp")
    assert np.array_equal(out.hard[:, :CONV.L], ref[:, :CONV.L])


def test_sliding_window_too_small():
    with pytest.raises(ValueError):
        sliding_window_decode(CONV, np.ones(8 * CONV.L), W=CONV.ms)
