"""Channel models, Monte Carlo BER runs and the bit-flip guarantee trial for LP decoding."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations
from math import comb, log, log10, sqrt
from typing import Optional

import numpy as np
from scipy import stats

from . import gf2
from .codes import ConvCode, QcCode, truncated_check, wrap
from .cone import build_polytope, code_cone
from .lpdecode import lp_decode
from .mpi import DEFAULT_CLIP, TannerGraph, decode_batch, sliding_window_decode
from .pseudoweights import min_maxfrac_lp

DECODERS = ("sp", "ms", "sw", "lp")


def ebn0_from_esn0(es_db: float, rate: float) -> float:
    return es_db - 10 * log10(rate)


def esn0_from_ebn0(eb_db: float, rate: float) -> float:
    return eb_db + 10 * log10(rate)


@dataclass(frozen=True)
class ChannelModel:
    """BPSK over AWGN (param = Es/N0 in dB), BSC (param = p) or BEC (param = erasure prob.)."""
    kind: str
    param: float
    clip: float = DEFAULT_CLIP

    def __post_init__(self):
        if self.kind not in ("awgn", "bsc", "bec"):
            raise ValueError(f"unknown channel {self.kind!r}")
        if self.kind == "bsc" and not 0 <= self.param < 0.5:
            raise ValueError("BSC needs 0 <= p < 1/2")
        if self.kind == "bec" and not 0 <= self.param < 1:
            raise ValueError("BEC needs 0 <= eps < 1")

    @property
    def sigma(self) -> float:
        """Noise standard deviation for unit-energy symbols, sigma^2 = 1 / (2 Es/N0)."""
        if self.kind != "awgn":
            raise ValueError("sigma is defined for the AWGN channel only")
        return sqrt(1 / (2 * 10 ** (self.param / 10)))

    def llr(self, bits: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Channel LLRs log P(y|0)/P(y|1) for the transmitted bits (one row per frame)."""
        bits = np.asarray(bits)
        x = 1.0 - 2.0 * bits
        if self.kind == "awgn":
            s = self.sigma
            # x * z has the law of z; writing the noise this way makes a codeword's
            # LLRs the sign mirror of the all-zero LLRs drawn from the same stream
            y = x * (1.0 + s * rng.standard_normal(bits.shape))
            return 2 * y / s ** 2
        if self.kind == "bsc":
            p = self.param
            flip = rng.random(bits.shape) < p
            mag = self.clip if p == 0 else min(log((1 - p) / p), self.clip)
            return np.where(flip, -x, x) * mag
        erased = rng.random(bits.shape) < self.param
        return np.where(erased, 0.0, x * self.clip)


@dataclass(frozen=True)
class BerPoint:
    snr: float
    trials: int
    bit_errors: int
    frame_errors: int
    decoder: str
    n: int                        # bits per frame
    bit_errors_sq: int = 0        # sum of squared per-frame bit errors, for clustered variance
    seed: Optional[int] = None

    def __post_init__(self):
        if self.bit_errors > self.trials * self.n:
            raise ValueError("more bit errors than transmitted bits")

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.trials * self.n) if self.trials else float("nan")

    @property
    def fer(self) -> float:
        return self.frame_errors / self.trials if self.trials else float("nan")

    @property
    def ber_variance(self) -> float:
        """Variance of the BER estimate, treating frames (not bits) as independent."""
        t = self.trials
        if t < 2:
            return float("inf")
        mean = self.bit_errors / t
        var = (self.bit_errors_sq - t * mean * mean) / (t - 1)
        return var / (t * self.n ** 2)

    def merge(self, other: "BerPoint") -> "BerPoint":
        if (self.snr, self.decoder, self.n) != (other.snr, other.decoder, other.n):
            raise ValueError("can only merge points of the same experiment")
        return replace(self, trials=self.trials + other.trials, bit_errors=self.bit_errors + other.bit_errors,
                       frame_errors=self.frame_errors + other.frame_errors,
                       bit_errors_sq=self.bit_errors_sq + other.bit_errors_sq)

    def csv(self) -> str:
        return f"{self.snr:g},{self.trials},{self.bit_errors},{self.frame_errors},{self.ber:.6g}"


def ber_ordering(a: BerPoint, b: BerPoint, confidence: float = 0.95) -> tuple:
    """One-sided test that BER(a) < BER(b) at the given confidence.

    Uses a normal approximation with frame-clustered variances (bit errors in
    one frame are not independent). Returns ``(significant, z)``.
    """
    se = sqrt(a.ber_variance + b.ber_variance)
    if se == 0:
        return a.ber < b.ber, float("inf") if a.ber < b.ber else 0.0
    z = (b.ber - a.ber) / se
    return z > stats.norm.ppf(confidence), z


def trial_rng(seed: int, point: int, trial: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for one trial; any trial can be replayed on its own.

    Stream 0 drives the channel, stream 1 the transmitted codeword.
    """
    key = [seed, point, trial] if stream == 0 else [seed, point, trial, stream]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def _sweep(spec) -> list:
    if isinstance(spec, str):
        if ":" in spec:
            a, b, st = (float(t) for t in spec.split(":"))
            if st <= 0 or b < a:
                raise ValueError("sweep needs start <= stop and a positive step")
            k = int(round((b - a) / st))
            return [round(a + i * st, 10) for i in range(k + 1)]
        return [float(t) for t in spec.split(",") if t.strip()]
    vals = [float(v) for v in spec]
    if not vals:
        raise ValueError("empty sweep")
    return vals


class _Target:
    """Uniform frame interface over block codes (H) and terminated convolutional streams."""

    def __init__(self, code, decoder, max_iter, window, stream_blocks, clip):
        self.decoder = decoder
        self.max_iter = max_iter
        self.clip = clip
        if decoder == "sw":
            if not isinstance(code, ConvCode):
                raise ValueError("the sliding-window decoder needs a convolutional code")
            self.conv = code
            self.W = window or 2 * (code.ms + 1)
            self.N = stream_blocks or 4 * self.W
            self.n = self.N * code.L
            # terminated stream: codewords of the window with ms trailing check blocks
            self.H = truncated_check(code, self.N + code.ms, self.N).realized
        else:
            if isinstance(code, ConvCode):
                raise ValueError(f"decoder {decoder!r} needs a block code")
            self.H = np.asarray(code.H if isinstance(code, QcCode) else code, dtype=np.uint8)
            self.n = self.H.shape[1]
            if decoder in ("sp", "ms"):
                self.graph = TannerGraph(self.H)
            else:
                self.poly = build_polytope(self.H)
        self._basis = None

    def codewords(self, rng, count) -> np.ndarray:
        if self._basis is None:
            self._basis = gf2.nullspace(self.H).astype(np.int64)
        k = self._basis.shape[0]
        if k == 0:
            return np.zeros((count, self.n), dtype=np.uint8)
        coef = rng.integers(0, 2, size=(count, k))
        return ((coef @ self._basis) & 1).astype(np.uint8)

    def decode(self, llr: np.ndarray) -> np.ndarray:
        if self.decoder in ("sp", "ms"):
            return decode_batch(self.graph, llr, self.decoder, self.max_iter, self.clip)[0]
        if self.decoder == "sw":
            return sliding_window_decode(self.conv, llr, self.W, self.max_iter, "sp", self.clip).hard
        out = np.zeros(llr.shape, dtype=np.uint8)
        for k, row in enumerate(llr):
            res = lp_decode(self.H, row, polytope=self.poly)
            # fractional coordinates get the non-bit value 2 so they always count as errors
            out[k] = [int(v) if v in (0, 1) else 2 for v in res.omega]
        return out


def run_ber(code, decoder: str = "sp", snrs=(2.0,), min_frame_errors: int = 100, max_trials: int = 10_000,
            seed: int = 0, channel: str = "awgn", max_iter: int = 50, window: Optional[int] = None,
            stream_blocks: Optional[int] = None, batch: int = 200, random_codewords: bool = False,
            clip: float = DEFAULT_CLIP) -> list:
    """Monte Carlo error rates over a sweep of channel parameters.

    Each point runs until ``min_frame_errors`` frame errors or ``max_trials``
    frames, whichever comes first. Trial t of point i draws its noise from
    its own stream keyed by (seed, i, t), so results do not depend on the
    batch size. By default the all-zero codeword is sent.
    """
    if decoder not in DECODERS:
        raise ValueError(f"decoder must be one of {DECODERS}")
    if min_frame_errors < 1 or max_trials < 1:
        raise ValueError("stop rule needs positive frame-error and trial limits")
    target = _Target(code, decoder, max_iter, window, stream_blocks, clip)
    points = []
    for pi, snr in enumerate(_sweep(snrs)):
        ch = ChannelModel(channel, snr, clip)
        trials = bit_err = frame_err = sq = 0
        while trials < max_trials and frame_err < min_frame_errors:
            size = min(batch, max_trials - trials)
            sent, llrs = [], []
            for t in range(trials, trials + size):
                if random_codewords:
                    c = target.codewords(trial_rng(seed, pi, t, 1), 1)[0]
                else:
                    c = np.zeros(target.n, dtype=np.uint8)
                sent.append(c)
                llrs.append(ch.llr(c, trial_rng(seed, pi, t)))
            sent, llrs = np.array(sent), np.array(llrs)
            errs = (target.decode(llrs) != sent).sum(axis=1)
            fe = np.cumsum(errs > 0)
            stop = np.searchsorted(fe, min_frame_errors - frame_err)   # first index reaching the quota
            used = size if stop >= size else stop + 1
            errs = errs[:used]
            trials += int(used)
            bit_err += int(errs.sum())
            sq += int((errs.astype(np.int64) ** 2).sum())
            frame_err += int((errs > 0).sum())
        points.append(BerPoint(snr, trials, bit_err, frame_err, decoder, target.n, sq, seed))
    return points


# -- guaranteed bit-flip correction --------------------------------------------------

@dataclass
class Theorem3Result:
    budget: int
    bound: object                  # half the minimum max-fractional weight of the wrapped code
    patterns: int
    failures: list = field(default_factory=list)
    exhaustive: bool = True

    @property
    def success(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.success


def theorem3_trial(c: ConvCode, r: int, budget: int, blocks: Optional[int] = None, strict: bool = True,
                   max_patterns: int = 5000, seed: int = 0) -> Theorem3Result:
    """LP-decode every BSC error pattern with at most ``budget`` flips on a terminated window.

    The window is H^(ms+N, N) with N = ``blocks`` (default r). With ``strict``
    the budget must stay below half the minimum max-fractional weight of the
    code wrapped modulo X^r - 1; otherwise failures are only recorded.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    bound = min_maxfrac_lp(code_cone(wrap(c, r))).value / 2
    if strict and not budget < bound:
        raise ValueError(f"budget {budget} is not below half the minimum max-fractional weight ({bound})")
    N = blocks or r
    H = truncated_check(c, c.ms + N, N).realized
    n = H.shape[1]
    poly = build_polytope(H)
    total = sum(comb(n, k) for k in range(budget + 1))
    if total <= max_patterns:
        pats = [p for k in range(budget + 1) for p in combinations(range(n), k)]
        exhaustive = True
    else:
        rng = np.random.default_rng(seed)
        pats = [tuple(sorted(rng.choice(n, size=budget, replace=False).tolist())) for _ in range(max_patterns)]
        exhaustive = False
    res = Theorem3Result(budget, bound, len(pats), exhaustive=exhaustive)
    for p in pats:
        llr = [1] * n
        for i in p:
            llr[i] = -1
        out = lp_decode(H, llr, polytope=poly)
        if not out.is_zero:
            res.failures.append(p)
    return res
