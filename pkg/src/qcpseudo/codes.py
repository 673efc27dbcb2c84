"""QC block codes, their unwrapped convolutional codes and distance computations."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import gf2
from .errors import GuardExceeded
from .polys import (
    BinPolyMatrix,
    binpoly,
    binpoly_mod,
    binpoly_mul,
    coefficient_decompose,
    expand_circulant,
    permuted_block_form,
)


@dataclass(frozen=True)
class QcCode:
    h: BinPolyMatrix

    def __post_init__(self):
        if self.h.modulus is None:
            raise ValueError("a QC code needs a matrix with modulus r")

    @property
    def r(self) -> int:
        return self.h.modulus

    @property
    def J(self) -> int:
        return self.h.shape[0]

    @property
    def L(self) -> int:
        return self.h.shape[1]

    @property
    def n(self) -> int:
        return self.r * self.L

    @property
    def design_rate(self) -> float:
        return (self.L - self.J) / self.L

    @cached_property
    def H(self) -> np.ndarray:
        """Scalar parity-check matrix in circulant block layout."""
        return expand_circulant(self.h)

    @cached_property
    def H_permuted(self) -> np.ndarray:
        return permuted_block_form(self.h)

    @property
    def dimension(self) -> int:
        return self.n - gf2.rank(self.H)


@dataclass(frozen=True)
class ConvCode:
    h: BinPolyMatrix

    def __post_init__(self):
        if self.h.modulus is not None:
            raise ValueError("a convolutional code takes a matrix without modulus")
        if self.h.max_degree < 0:
            raise ValueError("convolutional parity-check matrix is all zero")

    @property
    def J(self) -> int:
        return self.h.shape[0]

    @property
    def L(self) -> int:
        return self.h.shape[1]

    @property
    def ms(self) -> int:
        """Syndrome former memory."""
        return self.h.max_degree

    @property
    def rate(self) -> float:
        return (self.L - self.J) / self.L

    @cached_property
    def blocks(self) -> list:
        """Coefficient matrices H_0 .. H_ms."""
        return coefficient_decompose(self.h)


@dataclass(frozen=True)
class TruncatedCheckMatrix:
    """Rows of the first ``j`` block rows and columns of the first ``i`` block
    columns of the semi-infinite convolutional parity-check matrix."""

    base: ConvCode
    j: int
    i: int
    realized: np.ndarray = field(repr=False, compare=False)

    @property
    def shape(self) -> tuple:
        return self.realized.shape


def unwrap(q: QcCode) -> ConvCode:
    return ConvCode(q.h.with_modulus(None))


def wrap(c: ConvCode, r: int) -> QcCode:
    if r < 1:
        raise ValueError("circulant size r must be >= 1")
    return QcCode(c.h.with_modulus(r))


def truncated_check(c: ConvCode, j: int, i: int) -> TruncatedCheckMatrix:
    if j < 1 or i < 1:
        raise ValueError("need j >= 1 and i >= 1")
    J, L = c.J, c.L
    H = np.zeros((j * J, i * L), dtype=np.uint8)
    for a in range(j):
        for b in range(max(0, a - c.ms), min(i, a + 1)):
            H[a * J:(a + 1) * J, b * L:(b + 1) * L] = c.blocks[a - b]
    return TruncatedCheckMatrix(c, j, i, H)


def _is_poly_vector(c) -> bool:
    return len(c) > 0 and all(isinstance(p, (set, frozenset)) for p in c)


def poly_syndrome(h: BinPolyMatrix, c: Sequence) -> list:
    """h(X) c(X) over GF(2), reduced modulo X^r - 1 when ``h`` has a modulus."""
    J, L = h.shape
    if len(c) != L:
        raise ValueError(f"polynomial vector has {len(c)} components, expected {L}")
    out = []
    for row in h.entries:
        acc: set = set()
        for hp, cp in zip(row, c):
            acc ^= set(binpoly_mul(hp, cp, h.modulus))
        out.append(frozenset(acc))
    return out


def is_codeword(code, c) -> bool:
    """Membership test for a scalar 0/1 vector or a vector of GF(2) polynomials.

    Scalar vectors use the circulant layout (component-major) for QC codes and
    the time-major block layout for convolutional codes.
    """
    if _is_poly_vector(c):
        polys = [frozenset(p) for p in c]
        if isinstance(code, QcCode):
            polys = [binpoly_mod(p, code.r) for p in polys]
        return not any(poly_syndrome(code.h, polys))
    x = np.asarray(c, dtype=np.int64) & 1
    if isinstance(code, QcCode):
        if x.size != code.n:
            raise ValueError(f"length {x.size} does not match n = {code.n}")
        return not gf2.syndrome(code.H, x).any()
    if isinstance(code, ConvCode):
        if x.size % code.L:
            raise ValueError(f"length {x.size} is not a multiple of L = {code.L}")
        blocks = max(x.size // code.L, 1)
        H = truncated_check(code, blocks + code.ms, blocks).realized
        return not gf2.syndrome(H, x).any()
    H = np.asarray(code)
    if x.size != H.shape[1]:
        raise ValueError(f"length {x.size} does not match {H.shape[1]} columns")
    return not gf2.syndrome(H, x).any()


def reduce_codeword(c_blocks: np.ndarray, L: int, r: int) -> np.ndarray:
    """Wrap a time-major convolutional codeword modulo X^r - 1 over GF(2) and
    return it in the circulant (component-major) layout."""
    c = np.asarray(c_blocks, dtype=np.uint8).reshape(-1, L)
    out = np.zeros((L, r), dtype=np.uint8)
    for t, blk in enumerate(c):
        out[:, t % r] ^= blk
    return out.reshape(-1)


@dataclass(frozen=True)
class MinDistance:
    weight: Optional[int]
    codeword: Optional[np.ndarray] = field(default=None, repr=False, compare=False)
    exceeds_cap: bool = False

    def __int__(self):
        if self.weight is None:
            raise ValueError("no qualifying codeword")
        return self.weight


def min_distance_bruteforce(code, cap: Optional[int] = None, guard: int = gf2.ENUM_GUARD) -> MinDistance:
    """Exact minimum distance by nullspace enumeration.

    Beyond ``guard`` nullspace dimensions a weight ``cap`` switches to the
    weight-limited search; the result then reports ``exceeds_cap`` when no
    nonzero word of weight <= cap exists.
    """
    H = code.H if isinstance(code, QcCode) else np.asarray(code, dtype=np.uint8)
    basis = gf2.nullspace(H)
    if basis.shape[0] == 0:
        return MinDistance(None)
    if basis.shape[0] <= guard:
        w, word = gf2.min_weight_word(basis, guard=guard)
        if cap is not None and w > cap:
            return MinDistance(None, None, exceeds_cap=True)
        return MinDistance(w, word)
    if cap is None:
        raise GuardExceeded("codeword-enumeration", f"nullspace dimension {basis.shape[0]} > {guard}; pass a cap")
    w, word = gf2.min_weight_capped(H, cap)
    if w is None:
        return MinDistance(None, None, exceeds_cap=True)
    return MinDistance(w, word)


@dataclass
class FreeDistanceBounds:
    lower: list           # lower[l-1]: column-distance analogue, None when empty
    upper: list           # upper[l-1]: row-distance analogue, None when empty
    mu: Optional[int]     # first l with a qualifying word in the lower family
    nu: Optional[int]     # first l with a nonzero word in the upper family
    upper_witnesses: list = field(repr=False, default_factory=list)

    @property
    def trivial(self) -> bool:
        """No nonzero word in either family at any tested l."""
        return self.mu is None and self.nu is None

    @property
    def best_lower(self) -> Optional[int]:
        vals = [v for v in self.lower if v is not None]
        return max(vals) if vals else None

    @property
    def best_upper(self) -> Optional[int]:
        vals = [v for v in self.upper if v is not None]
        return min(vals) if vals else None

    @property
    def d_free(self) -> Optional[int]:
        """Exact free distance once the two sequences meet."""
        lo, up = self.best_lower, self.best_upper
        if lo is not None and up is not None and lo == up:
            return lo
        return None


def free_distance_bounds(c: ConvCode, l_max: int, guard: int = gf2.ENUM_GUARD) -> FreeDistanceBounds:
    """Column/row distance style brackets on d_free from nullspaces of truncations.

    lower[l]: min weight over ker H^(l,l) with a nonzero first block.
    upper[l]: min weight over ker H^(ms+l, l) (complete codewords).
    """
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    L = c.L
    lower, upper, wits = [], [], []
    mu = nu = None
    for l in range(1, l_max + 1):
        Hl = truncated_check(c, l, l).realized
        basis = gf2.nullspace(Hl)
        mask = np.zeros(l * L, dtype=np.uint8)
        mask[:L] = 1
        w, _ = gf2.min_weight_word(basis, mask=mask, guard=guard) if basis.shape[0] else (None, None)
        lower.append(w)
        if w is not None and mu is None:
            mu = l
        Hu = truncated_check(c, c.ms + l, l).realized
        basis = gf2.nullspace(Hu)
        w, word = gf2.min_weight_word(basis, guard=guard) if basis.shape[0] else (None, None)
        upper.append(w)
        wits.append(word)
        if w is not None and nu is None:
            nu = l
    return FreeDistanceBounds(lower, upper, mu, nu, wits)


def poly_vector_from_blocks(c_blocks: np.ndarray, L: int) -> list:
    """Time-major scalar word -> list of L GF(2) polynomials."""
    c = np.asarray(c_blocks, dtype=np.uint8).reshape(-1, L)
    return [binpoly(*np.flatnonzero(c[:, l]).tolist()) for l in range(L)]
