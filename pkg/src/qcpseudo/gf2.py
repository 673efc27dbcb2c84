"""Dense GF(2) linear algebra and exhaustive low-weight codeword search."""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from .errors import GuardExceeded

ENUM_GUARD = 28


def row_reduce(H: np.ndarray) -> tuple:
    """Reduced row echelon form over GF(2). Returns (R, pivot_columns)."""
    R = (np.asarray(H, dtype=np.uint8) & 1).copy()
    m, n = R.shape
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        hits = np.nonzero(R[row:, col])[0]
        if hits.size == 0:
            continue
        p = row + hits[0]
        if p != row:
            R[[row, p]] = R[[p, row]]
        others = np.nonzero(R[:, col])[0]
        others = others[others != row]
        R[others] ^= R[row]
        pivots.append(col)
        row += 1
    return R[:row], pivots


def rank(H: np.ndarray) -> int:
    return len(row_reduce(H)[1])


def nullspace(H: np.ndarray) -> np.ndarray:
    """Basis of {x : Hx = 0} over GF(2), one basis vector per row."""
    H = np.asarray(H, dtype=np.uint8)
    n = H.shape[1]
    if H.shape[0] == 0:
        return np.eye(n, dtype=np.uint8)
    R, pivots = row_reduce(H)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, p in enumerate(pivots):
            basis[k, p] = R[i, f]
    return basis


def syndrome(H: np.ndarray, x: np.ndarray) -> np.ndarray:
    return (np.asarray(H, dtype=np.int64) @ np.asarray(x, dtype=np.int64)) & 1


def _pack(rows: np.ndarray) -> np.ndarray:
    """Pack 0/1 rows into uint64 words (little-endian bit order)."""
    k, n = rows.shape
    words = (n + 63) // 64
    padded = np.zeros((k, words * 64), dtype=np.uint8)
    padded[:, :n] = rows
    return np.packbits(padded.reshape(k, words, 64), axis=2, bitorder="little").view(np.uint64).reshape(k, words)


def _unpack(word: np.ndarray, n: int) -> np.ndarray:
    bits = np.unpackbits(np.ascontiguousarray(word).view(np.uint8), bitorder="little")
    return bits[:n].astype(np.uint8)


def min_weight_word(basis: np.ndarray, mask: Optional[np.ndarray] = None,
                    guard: int = ENUM_GUARD) -> tuple:
    """Minimum Hamming weight over nonzero combinations of ``basis`` rows.

    With ``mask`` only words that are nonzero on the masked positions count.
    Returns ``(weight, word)`` or ``(None, None)`` when no word qualifies.
    The walk is a Gray code over the high basis vectors combined with a full
    table of the low ones, all on packed 64-bit words.
    """
    basis = np.asarray(basis, dtype=np.uint8)
    k, n = basis.shape if basis.ndim == 2 else (0, 0)
    if k == 0:
        return None, None
    if k > guard:
        raise GuardExceeded("codeword-enumeration", f"nullspace dimension {k} > {guard}")
    packed = _pack(basis)
    mpack = None if mask is None else _pack(np.asarray(mask, dtype=np.uint8)[None, :])[0]
    low = min(k, 16)
    table = np.zeros((1 << low, packed.shape[1]), dtype=np.uint64)
    for i in range(low):
        table[1 << i: 2 << i] = table[: 1 << i] ^ packed[i]
    best_w, best_word = None, None
    cur = np.zeros(packed.shape[1], dtype=np.uint64)
    for step in range(1 << (k - low)):
        if step:
            # flip the basis vector given by the lowest set bit of step
            cur = cur ^ packed[low + (step & -step).bit_length() - 1]
        words = table ^ cur
        w = np.bitwise_count(words).sum(axis=1, dtype=np.int64)
        ok = w > 0
        if mpack is not None:
            ok &= np.bitwise_count(words & mpack).sum(axis=1) > 0
        if not ok.any():
            continue
        idx = np.flatnonzero(ok)
        j = idx[np.argmin(w[idx])]
        if best_w is None or w[j] < best_w:
            best_w, best_word = int(w[j]), words[j].copy()
    if best_w is None:
        return None, None
    return best_w, _unpack(best_word, n)


def min_weight_capped(H: np.ndarray, cap: int) -> tuple:
    """Minimum weight of a nonzero word of ker(H) if it is at most ``cap``.

    Works on the systematic form: a codeword of weight <= cap has at most
    ``cap`` ones among the free (information) positions, so only those patterns
    are expanded. Returns ``(None, None)`` when every nonzero word exceeds cap.
    """
    H = np.asarray(H, dtype=np.uint8)
    n = H.shape[1]
    R, pivots = row_reduce(H)
    free = [c for c in range(n) if c not in set(pivots)]
    if not free:
        return None, None
    # column f of R restricted to pivot rows gives the pivot bits induced by free bit f
    P = R[:, free] if R.shape[0] else np.zeros((0, len(free)), dtype=np.uint8)
    best_w, best = None, None
    for t in range(1, min(cap, len(free)) + 1):
        if best_w is not None and t >= best_w:
            break
        for sub in combinations(range(len(free)), t):
            piv_bits = np.bitwise_xor.reduce(P[:, list(sub)], axis=1) if P.shape[0] else P[:, 0]
            w = t + int(piv_bits.sum())
            if w <= cap and (best_w is None or w < best_w):
                word = np.zeros(n, dtype=np.uint8)
                word[[free[s] for s in sub]] = 1
                word[pivots] = piv_bits
                best_w, best = w, word
    return best_w, best


def capped_search_size(k: int, cap: int) -> int:
    return sum(comb(k, t) for t in range(1, min(cap, k) + 1))
