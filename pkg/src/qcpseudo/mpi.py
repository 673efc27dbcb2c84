"""Flooding sum-product and min-sum decoders and a sliding-window decoder.

Messages live on edges sorted by check node, so check updates are segment
reductions (``np.*.reduceat``) and variable updates are sparse products.
All decoders work on a batch of LLR vectors at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import sparse

from .codes import ConvCode
from .weights import exact

DEFAULT_CLIP = 50.0
DEFAULT_MAX_ITER = 50


class TannerGraph:
    def __init__(self, H):
        H = np.asarray(H, dtype=np.uint8)
        self.H = H
        self.m, self.n = H.shape
        chk, var = np.nonzero(H)              # row-major: sorted by check
        self.edge_chk = chk
        self.edge_var = var
        self.num_edges = chk.size
        deg = np.bincount(chk, minlength=self.m)
        self.check_deg = deg
        self.ptr = np.concatenate([[0], np.cumsum(deg)[:-1]])
        self.active = deg > 0                 # reduceat misbehaves on empty segments
        self.var_sum = sparse.csr_matrix(
            (np.ones(self.num_edges), (np.arange(self.num_edges), var)), shape=(self.num_edges, self.n))

    @property
    def edges(self) -> set:
        return set(zip(self.edge_chk.tolist(), self.edge_var.tolist()))

    def syndrome(self, hard: np.ndarray) -> np.ndarray:
        """Per-row syndromes of a batch of hard decisions (B x n) -> (B x m)."""
        return (hard.astype(np.int64) @ self.H.T.astype(np.int64)) & 1

    def _seg(self, ufunc, vals: np.ndarray) -> np.ndarray:
        """Per-check reduction of edge values (B x E) -> (B x m)."""
        out = np.empty((vals.shape[0], self.m), dtype=vals.dtype)
        idx = self.ptr[self.active]
        if idx.size:
            out[:, self.active] = ufunc.reduceat(vals, idx, axis=1)
        return out


@dataclass
class DecodeOutcome:
    hard: np.ndarray
    iterations: int
    converged: bool
    trajectory: Optional[list] = field(default=None, repr=False)
    oscillations: int = 0         # iterations that revisit an earlier, non-adjacent decision


def _check_update_sp(g: TannerGraph, v2c: np.ndarray, clip: float) -> np.ndarray:
    t = np.tanh(np.clip(v2c, -clip, clip) / 2)
    mag = np.abs(t)
    zero = mag == 0
    logm = np.log(np.where(zero, 1.0, mag))
    neg = (t < 0).astype(np.int64)
    tot_log = g._seg(np.add, logm)[:, g.edge_chk]
    tot_zero = g._seg(np.add, zero.astype(np.int64))[:, g.edge_chk]
    tot_neg = g._seg(np.add, neg)[:, g.edge_chk]
    others = np.exp(tot_log - logm)
    others = np.where(tot_zero - zero > 0, 0.0, others)
    sign = np.where((tot_neg - neg) % 2 == 1, -1.0, 1.0)
    prod = np.clip(sign * others, -1 + 1e-16, 1 - 1e-16)
    return np.clip(2 * np.arctanh(prod), -clip, clip)


def _check_update_ms(g: TannerGraph, v2c: np.ndarray) -> np.ndarray:
    mag = np.abs(v2c)
    neg = (v2c < 0).astype(np.int64)
    min1 = g._seg(np.minimum, mag)
    at_min = mag == min1[:, g.edge_chk]
    cnt = g._seg(np.add, at_min.astype(np.int64))[:, g.edge_chk]
    min2 = g._seg(np.minimum, np.where(at_min, np.inf, mag))
    other = np.where(at_min & (cnt == 1), min2[:, g.edge_chk], min1[:, g.edge_chk])
    tot_neg = g._seg(np.add, neg)[:, g.edge_chk]
    sign = np.where((tot_neg - neg) % 2 == 1, -1.0, 1.0)
    return sign * other


def decode_batch(g: TannerGraph, llr: np.ndarray, algo: str = "sp", max_iter: int = DEFAULT_MAX_ITER,
                 clip: float = DEFAULT_CLIP, record: bool = False) -> tuple:
    """Decode a batch (B x n). Returns (hard, iterations, converged, trajectory).

    Each iteration is one check update, one variable update and a hard
    decision; decoding stops per word at the first zero syndrome.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    llr = np.atleast_2d(np.asarray(llr, dtype=float))
    if not np.all(np.isfinite(llr)):
        raise ValueError("LLR entries must be finite")
    if llr.shape[1] != g.n:
        raise ValueError(f"LLR length {llr.shape[1]} does not match n = {g.n}")
    if algo not in ("sp", "ms"):
        raise ValueError("algo must be 'sp' or 'ms'")
    if algo == "sp":
        llr = np.clip(llr, -clip, clip)
    B = llr.shape[0]
    hard = (llr < 0).astype(np.uint8)
    iters = np.zeros(B, dtype=np.int64)
    done = np.zeros(B, dtype=bool)
    traj = [] if record else None
    act = np.arange(B)
    lam = llr
    v2c = lam[:, g.edge_var]
    for it in range(1, max_iter + 1):
        c2v = _check_update_sp(g, v2c, clip) if algo == "sp" else _check_update_ms(g, v2c)
        total = lam + (g.var_sum.T @ c2v.T).T
        v2c = total[:, g.edge_var] - c2v
        h = (total < 0).astype(np.uint8)
        hard[act] = h
        iters[act] = it
        if record:
            traj.append(hard.copy())
        ok = ~g.syndrome(h).any(axis=1)
        if ok.any():
            done[act[ok]] = True
            keep = ~ok
            act, lam, v2c = act[keep], lam[keep], v2c[keep]
            if act.size == 0:
                break
    return hard, iters, done, traj


def _count_oscillations(traj: list) -> int:
    seen = {}
    count = 0
    for k, h in enumerate(traj):
        key = h.tobytes()
        if key in seen and seen[key] < k - 1:
            count += 1
        seen[key] = k
    return count


def _single(g, llr, algo, max_iter, clip, record) -> DecodeOutcome:
    hard, iters, done, traj = decode_batch(g, np.asarray(llr, dtype=float)[None, :], algo, max_iter, clip, True)
    steps = [t[0] for t in traj]
    return DecodeOutcome(hard[0], int(iters[0]), bool(done[0]), steps if record else None,
                         _count_oscillations(steps))


def sum_product_decode(g: TannerGraph, llr, max_iter: int = DEFAULT_MAX_ITER, clip: float = DEFAULT_CLIP,
                       record: bool = False) -> DecodeOutcome:
    return _single(g, llr, "sp", max_iter, clip, record)


def _exact_min_sum(g: TannerGraph, llr, max_iter: int, record: bool) -> DecodeOutcome:
    """Min-sum on exact rationals; degree-1 checks send +inf."""
    lam = [exact(v) for v in llr]
    if len(lam) != g.n:
        raise ValueError(f"LLR length {len(lam)} does not match n = {g.n}")
    E = g.num_edges
    by_check = [list(range(g.ptr[c], g.ptr[c] + g.check_deg[c])) for c in range(g.m)]
    v2c = [lam[g.edge_var[e]] for e in range(E)]
    traj = []
    hard = np.array([1 if v < 0 else 0 for v in lam], dtype=np.uint8)
    it = 0
    converged = False
    for it in range(1, max_iter + 1):
        c2v = [None] * E
        for edges in by_check:
            for e in edges:
                mag, neg = float("inf"), 0
                for f in edges:
                    if f != e:
                        mag = min(mag, abs(v2c[f]))
                        neg ^= v2c[f] < 0
                c2v[e] = -mag if neg else mag
        total = list(lam)
        for e in range(E):
            total[g.edge_var[e]] = total[g.edge_var[e]] + c2v[e]
        v2c = [total[g.edge_var[e]] - c2v[e] for e in range(E)]
        hard = np.array([1 if v < 0 else 0 for v in total], dtype=np.uint8)
        traj.append(hard)
        if not g.syndrome(hard[None, :]).any():
            converged = True
            break
    return DecodeOutcome(hard, it, converged, traj if record else None, _count_oscillations(traj))


def min_sum_decode(g: TannerGraph, llr, max_iter: int = DEFAULT_MAX_ITER, exact_mode: bool = False,
                   record: bool = False) -> DecodeOutcome:
    """Min-sum decoding. ``exact_mode`` runs on rationals, so the whole
    trajectory is invariant under positive scaling of the LLRs."""
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if exact_mode:
        return _exact_min_sum(g, llr, max_iter, record)
    return _single(g, llr, "ms", max_iter, np.inf, record)


# -- sliding window ------------------------------------------------------------------

def window_matrix(c: ConvCode, t: int, W: int) -> tuple:
    """Check rows of block rows t..t+W-1 over block columns cs..t+W-1, cs = max(0, t-ms)."""
    cs = max(0, t - c.ms)
    J, L = c.J, c.L
    ncols = t + W - cs
    H = np.zeros((W * J, ncols * L), dtype=np.uint8)
    for a in range(W):
        for b in range(ncols):
            k = (t + a) - (cs + b)
            if 0 <= k <= c.ms:
                H[a * J:(a + 1) * J, b * L:(b + 1) * L] = c.blocks[k]
    return H, cs


@dataclass
class WindowOutcome:
    hard: np.ndarray               # (B, N*L) committed decisions
    block_converged: np.ndarray    # (B, N) window syndrome zero when the block was committed
    block_iterations: np.ndarray   # (B, N)


def sliding_window_decode(c: ConvCode, llr, W: int, max_iter: int = DEFAULT_MAX_ITER, algo: str = "sp",
                          clip: float = DEFAULT_CLIP) -> WindowOutcome:
    """Decode a terminated stream of N blocks (llr shape (N*L,) or (B, N*L)).

    The window spans W block rows; the oldest block is committed and the
    window slides by one block. Committed blocks and the known-zero padding
    after block N-1 enter as saturated LLRs.
    """
    if W < c.ms + 1:
        raise ValueError(f"window W={W} must be at least ms + 1 = {c.ms + 1}")
    llr = np.atleast_2d(np.asarray(llr, dtype=float))
    L = c.L
    if llr.shape[1] % L:
        raise ValueError("stream length is not a multiple of L")
    B, N = llr.shape[0], llr.shape[1] // L
    sat = clip if np.isfinite(clip) else 1e9
    stream = np.concatenate([llr, np.full((B, W * L), sat)], axis=1)
    hard = np.zeros((B, N * L), dtype=np.uint8)
    conv = np.zeros((B, N), dtype=bool)
    iters = np.zeros((B, N), dtype=np.int64)
    graphs = {}
    for t in range(N):
        key = min(t, c.ms)
        if key not in graphs:
            graphs[key] = TannerGraph(window_matrix(c, t, W)[0])
        g = graphs[key]
        cs = t - key
        win = stream[:, cs * L:(t + W) * L].copy()
        if key:
            past = hard[:, cs * L:t * L]
            win[:, :key * L] = np.where(past == 1, -sat, sat)
        h, it, ok, _ = decode_batch(g, win, algo, max_iter, clip)
        hard[:, t * L:(t + 1) * L] = h[:, key * L:(key + 1) * L]
        conv[:, t] = ok
        iters[:, t] = it
    return WindowOutcome(hard, conv, iters)
