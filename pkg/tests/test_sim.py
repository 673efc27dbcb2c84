from math import sqrt

import numpy as np
import pytest

from qcpseudo import gf2
from qcpseudo.codes import QcCode, unwrap
from qcpseudo.fixtures import ex11_qc
from qcpseudo.sim import (BerPoint, ChannelModel, Theorem3Result, ber_ordering, ebn0_from_esn0, esn0_from_ebn0,
                          run_ber, theorem3_trial, trial_rng)

Q5 = QcCode(ex11_qc(5))
CONV = unwrap(Q5)


def test_channel_validation():
    with pytest.raises(ValueError):
        ChannelModel("bsc", 0.5)
    with pytest.raises(ValueError):
        ChannelModel("bec", 1.0)
    with pytest.raises(ValueError):
        ChannelModel("rayleigh", 1.0)
    with pytest.raises(ValueError):
        ChannelModel("bsc", 0.1).sigma
    assert ChannelModel("awgn", 0.0).sigma == pytest.approx(sqrt(0.5))


def test_channel_llr_signs():
    rng = np.random.default_rng(0)
    bits = np.array([0, 1, 0, 1])
    assert np.array_equal(np.sign(ChannelModel("bsc", 0.0).llr(bits, rng)), [1, -1, 1, -1])
    bec = ChannelModel("bec", 0.0, clip=7.0).llr(bits, rng)
    assert np.array_equal(bec, [7, -7, 7, -7])
    awgn = ChannelModel("awgn", 60.0).llr(np.zeros((3, 5), dtype=int), rng)
    assert (awgn > 0).all()


def test_snr_conversions():
    assert ebn0_from_esn0(0.0, 0.25) == pytest.approx(6.0206, abs=1e-4)
    assert esn0_from_ebn0(ebn0_from_esn0(1.3, 0.4), 0.4) == pytest.approx(1.3)


def test_trial_rng_replay():
    a = trial_rng(3, 1, 17).standard_normal(5)
    b = trial_rng(3, 1, 17).standard_normal(5)
    c = trial_rng(3, 1, 18).standard_normal(5)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_replay_determinism_and_batch_independence():
    kw = dict(snrs="0:1:1", min_frame_errors=20, max_trials=600, seed=9)
    a = run_ber(Q5, "sp", **kw)
    b = run_ber(Q5, "sp", **kw)
    c = run_ber(Q5, "sp", batch=37, **kw)
    assert a == b == c
    assert [p.snr for p in a] == [0.0, 1.0]
    assert all(p.frame_errors <= 20 and p.trials <= 600 for p in a)


def test_stop_rule_exact():
    p = run_ber(Q5, "sp", snrs=(-2.0,), min_frame_errors=25, max_trials=5000, seed=1)[0]
    assert p.frame_errors == 25 and p.trials < 5000


def test_zero_noise_limit():
    for dec in ("sp", "ms", "lp"):
        p = run_ber(Q5, dec, snrs=(80.0,), min_frame_errors=1, max_trials=50)[0]
        assert p.bit_errors == 0 and p.trials == 50
    p = run_ber(CONV, "sw", snrs=(80.0,), min_frame_errors=1, max_trials=20)[0]
    assert p.bit_errors == 0


def test_bsc_and_bec_channels():
    p = run_ber(Q5, "sp", snrs=(0.0,), channel="bsc", min_frame_errors=1, max_trials=30)[0]
    assert p.bit_errors == 0
    p = run_ber(Q5, "sp", snrs=(0.05,), channel="bec", min_frame_errors=1000, max_trials=300, seed=2)[0]
    assert p.ber < 0.01


def test_random_codeword_equivalence():
    kw = dict(snrs=(-2.0,), min_frame_errors=10 ** 6, max_trials=2000, seed=4)
    zero = run_ber(Q5, "sp", **kw)[0]
    rand = run_ber(Q5, "sp", random_codewords=True, **kw)[0]
    assert zero.frame_errors > 50
    sd = sqrt(zero.ber * (1 - zero.ber) / (zero.trials * zero.n))
    assert abs(rand.ber - zero.ber) <= 2 * sd
    assert 2 ** gf2.nullspace(Q5.H).shape[0] == 128


def test_random_codewords_are_codewords():
    from qcpseudo.sim import _Target
    from qcpseudo.codes import is_codeword
    words = _Target(Q5, "sp", 50, None, None, 50.0).codewords(np.random.default_rng(0), 64)
    assert all(is_codeword(Q5.H, w) for w in words) and len({w.tobytes() for w in words}) > 20


def test_berpoint_merge_and_invariants():
    a = BerPoint(1.0, 10, 4, 2, "sp", 20, 10)
    b = BerPoint(1.0, 5, 1, 1, "sp", 20, 1)
    m = a.merge(b)
    assert (m.trials, m.bit_errors, m.frame_errors, m.bit_errors_sq) == (15, 5, 3, 11)
    with pytest.raises(ValueError):
        a.merge(BerPoint(2.0, 1, 0, 0, "sp", 20))
    with pytest.raises(ValueError):
        BerPoint(0.0, 1, 21, 1, "sp", 20)
    assert a.csv().startswith("1,10,4,2,")


def test_ber_ordering():
    good = BerPoint(0.0, 1000, 20, 10, "sw", 100, 60)
    bad = BerPoint(0.0, 1000, 200, 100, "sp", 100, 600)
    sig, z = ber_ordering(good, bad)
    assert sig and z > 1.645
    sig, _ = ber_ordering(bad, good)
    assert not sig


def test_run_ber_validation():
    with pytest.raises(ValueError):
        run_ber(Q5, "viterbi")
    with pytest.raises(ValueError):
        run_ber(Q5, "sp", snrs="2:1:0.5")
    with pytest.raises(ValueError):
        run_ber(Q5, "sp", min_frame_errors=0)


def test_theorem3_budget_two():
    res = theorem3_trial(CONV, 5, 2)
    assert res.success and res.exhaustive
    assert res.bound == pytest.approx(7 / 3) and res.patterns == 211


def test_theorem3_budget_zero():
    res = theorem3_trial(CONV, 5, 0)
    assert bool(res) and res.patterns == 1


def test_theorem3_at_bound():
    with pytest.raises(ValueError):
        theorem3_trial(CONV, 5, 3)
    res = theorem3_trial(CONV, 5, 3, strict=False, max_patterns=200, seed=1)
    assert isinstance(res, Theorem3Result) and res.patterns == 200 and not res.exhaustive
    with pytest.raises(ValueError):
        theorem3_trial(CONV, 5, -1)
