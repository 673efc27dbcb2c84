"""Fundamental cone and fundamental polytope inequality systems."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Optional, Sequence

import numpy as np

from .codes import ConvCode, QcCode, truncated_check, wrap
from .errors import GuardExceeded
from .weights import exact
from .polys import BinPolyMatrix, NonnegPolyVec, reduce_mod

POLYTOPE_ROW_GUARD = 20


def to_exact(vec) -> list:
    """Exact rationals from ints, Fractions, decimal strings or floats
    (floats are taken at their exact binary value)."""
    return [exact(v) for v in vec]


def _integerize(vec: Sequence[Fraction]) -> list:
    den = 1
    for v in vec:
        den = lcm(den, v.denominator)
    return [int(v * den) for v in vec]


def _exact_products(K: np.ndarray, vec) -> np.ndarray:
    """K @ vec up to a positive factor, without rounding."""
    ints = _integerize(to_exact(vec))
    bound = max((abs(v) for v in ints), default=0) * max(K.shape[1], 1)
    if bound < 2 ** 62:
        return K.astype(np.int64) @ np.array(ints, dtype=np.int64)
    return K.astype(object) @ np.array(ints, dtype=object)


def _fmt_row(k: np.ndarray, rhs=0, sense=">=") -> str:
    terms = []
    for i in np.flatnonzero(k):
        c = int(k[i])
        sign = "+" if c > 0 else "-"
        mag = "" if abs(c) == 1 else str(abs(c))
        terms.append(f"{sign}{mag}w{i + 1}")
    lhs = "".join(terms).lstrip("+") or "0"
    return f"{lhs} {sense} {rhs}"


@dataclass(frozen=True)
class ConeSystem:
    """Rows ``k`` with semantics ``k . w >= 0``.

    provenance[k] is ``("nonneg", i)`` or ``("check", j, i_prime)``.
    """

    n: int
    rows: np.ndarray = field(repr=False)
    provenance: tuple = field(repr=False)
    checks: tuple = field(repr=False, default=())   # supports I_j, in row order
    # (r, L) when the coordinates are in circulant layout and the system is
    # invariant under the simultaneous cyclic shift of all L blocks
    symmetry: Optional[tuple] = None

    @property
    def num_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def check_rows(self) -> np.ndarray:
        """Rows other than non-negativity (the only ones an LP needs explicitly)."""
        keep = [k for k, p in enumerate(self.provenance) if p[0] != "nonneg"]
        return self.rows[keep]

    def describe_row(self, k: int) -> str:
        return _fmt_row(self.rows[k])


@dataclass(frozen=True)
class Membership:
    member: bool
    row: Optional[int] = None
    provenance: Optional[tuple] = None
    text: Optional[str] = None

    def __bool__(self):
        return self.member


def build_cone(H: np.ndarray) -> ConeSystem:
    H = np.asarray(H, dtype=np.uint8)
    m, n = H.shape
    rows = [np.eye(n, dtype=np.int64)] if n else []
    prov = [("nonneg", i) for i in range(n)]
    checks = []
    extra = []
    for j in range(m):
        supp = np.flatnonzero(H[j])
        checks.append(tuple(int(i) for i in supp))
        for ip in supp:
            k = np.zeros(n, dtype=np.int64)
            k[supp] = 1
            k[ip] = -1
            extra.append(k)
            prov.append(("check", j, int(ip)))
    if extra:
        rows.append(np.array(extra))
    K = np.vstack(rows) if rows else np.zeros((0, n), dtype=np.int64)
    return ConeSystem(n, K, tuple(prov), tuple(checks))


def _check_system(sys: ConeSystem, vec) -> Membership:
    if len(vec) != sys.n:
        raise ValueError(f"vector length {len(vec)} does not match cone dimension {sys.n}")
    vals = _exact_products(sys.rows, vec)
    bad = np.flatnonzero(vals < 0)
    if bad.size == 0:
        return Membership(True)
    k = int(bad[0])
    return Membership(False, k, sys.provenance[k], sys.describe_row(k))


def code_cone(code) -> ConeSystem:
    if isinstance(code, QcCode):
        return replace(build_cone(code.H), symmetry=(code.r, code.L))
    if isinstance(code, BinPolyMatrix):
        return code_cone(QcCode(code) if code.modulus else ConvCode(code))
    raise TypeError("pass a QcCode, or use conv_window_cone for convolutional codes")


def conv_window_cone(c: ConvCode, blocks: int) -> ConeSystem:
    """Cone of H^(blocks + ms, blocks): every check touching the first ``blocks``
    block columns, which is exact for vectors supported on those blocks."""
    return build_cone(truncated_check(c, blocks + c.ms, blocks).realized)


def cone_contains(target, omega) -> Membership:
    """Exact membership test.

    ``target`` is a :class:`ConeSystem` (``omega`` a scalar vector), or a
    :class:`QcCode` / :class:`ConvCode` with ``omega`` a :class:`NonnegPolyVec`
    or scalar vector (circulant layout for QC, time-major for convolutional).
    """
    if isinstance(target, ConeSystem):
        return _check_system(target, omega)
    if isinstance(target, np.ndarray):
        return _check_system(build_cone(target), omega)
    if isinstance(target, QcCode):
        if isinstance(omega, NonnegPolyVec):
            if len(omega) != target.L:
                raise ValueError("component count does not match L")
            if omega.degree >= target.r:
                raise ValueError("polynomial degree exceeds r - 1; apply reduce_mod first")
            omega = omega.to_circulant_scalar(target.r)
        return _check_system(code_cone(target), omega)
    if isinstance(target, ConvCode):
        if isinstance(omega, NonnegPolyVec):
            if len(omega) != target.L:
                raise ValueError("component count does not match L")
            blocks = max(omega.degree + 1, 1)
            omega = omega.to_scalar(blocks)
        else:
            if len(omega) % target.L:
                raise ValueError("scalar length is not a multiple of L")
            blocks = max(len(omega) // target.L, 1)
            omega = list(omega) or [0] * target.L
        return _check_system(conv_window_cone(target, blocks), omega)
    raise TypeError(f"unsupported cone target {type(target).__name__}")


# -- monomial formulation --------------------------------------------------

def _poly_shift(p: dict, e: int, r: Optional[int]) -> dict:
    out: dict = {}
    for d, c in p.items():
        k = d + e if r is None else (d + e) % r
        out[k] = out.get(k, 0) + c
    return out


def _poly_add(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for d, c in b.items():
        out[d] = out.get(d, 0) + sign * c
    return {d: c for d, c in out.items() if c != 0}


@dataclass(frozen=True)
class MonomialCheck:
    member: bool
    product: tuple   # product[l][j] = (Omega H^T)[l, j] as degree -> coefficient

    def __bool__(self):
        return self.member

    def entry(self, l: int, j: int) -> dict:
        """1-based entry of the L x J matrix (H Omega^T)^T."""
        return dict(sorted(self.product[l - 1][j - 1].items()))


def monomial_cone_check(h: BinPolyMatrix, omega: NonnegPolyVec) -> MonomialCheck:
    """Cone test through the matrix Omega whose row l is omega with component l negated.

    Entry (l, j) of the returned product is sum_k Omega[l, k] h_{jk}, i.e. the
    (j, l) entry of H Omega^T; membership holds iff every coefficient is >= 0.
    """
    if not h.is_monomial():
        raise ValueError("monomial_cone_check needs every entry to be a single monomial")
    J, L = h.shape
    if len(omega) != L:
        raise ValueError("component count does not match L")
    r = h.modulus
    comps = omega.components
    if r is not None:
        if omega.degree >= r:
            raise ValueError("polynomial degree exceeds r - 1; apply reduce_mod first")
    exps = [[next(iter(p)) for p in row] for row in h.entries]
    prod = []
    ok = True
    for l in range(L):
        row = []
        for j in range(J):
            acc: dict = {}
            for k in range(L):
                term = _poly_shift(comps[k], exps[j][k], r)
                acc = _poly_add(acc, term, -1 if k == l else 1)
            if any(c < 0 for c in acc.values()):
                ok = False
            row.append(acc)
        prod.append(tuple(row))
    return MonomialCheck(ok, tuple(prod))


def project_pseudocodeword(c: ConvCode, omega: NonnegPolyVec, r: int) -> NonnegPolyVec:
    """Wrap a convolutional pseudo-codeword modulo X^r - 1 and verify that the
    image lies in the fundamental cone of the wrapped QC code."""
    m = cone_contains(c, omega)
    if not m:
        raise ValueError(f"input is not in the convolutional cone (violates {m.text})")
    out = reduce_mod(omega, r)
    img = cone_contains(wrap(c, r), out)
    if not img:
        raise AssertionError(f"projection left the wrapped cone at row {img.text}")
    return out


# -- polytope ----------------------------------------------------------------

@dataclass(frozen=True)
class PolytopeSystem:
    """``A w <= b`` holding the forbidden-set rows then the box ``0 <= w <= 1``."""

    n: int
    A: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    provenance: tuple = field(repr=False)

    @property
    def num_forbidden(self) -> int:
        return sum(1 for p in self.provenance if p[0] == "forbidden")

    def forbidden_rows(self) -> tuple:
        idx = [k for k, p in enumerate(self.provenance) if p[0] == "forbidden"]
        return self.A[idx], self.b[idx]

    def contains(self, omega) -> Membership:
        if len(omega) != self.n:
            raise ValueError("dimension mismatch")
        w = to_exact(omega)
        for k in range(self.A.shape[0]):
            lhs = sum((int(a) * w[i] for i, a in enumerate(self.A[k]) if a), Fraction(0))
            if lhs > int(self.b[k]):
                return Membership(False, k, self.provenance[k], _fmt_row(self.A[k], int(self.b[k]), "<="))
        return Membership(True)


def build_polytope(H: np.ndarray, max_row_weight: int = POLYTOPE_ROW_GUARD) -> PolytopeSystem:
    H = np.asarray(H, dtype=np.uint8)
    m, n = H.shape
    A, b, prov = [], [], []
    for j in range(m):
        supp = [int(i) for i in np.flatnonzero(H[j])]
        if len(supp) > max_row_weight:
            raise GuardExceeded("polytope-row-weight", f"check {j} has weight {len(supp)} > {max_row_weight}")
        for size in range(1, len(supp) + 1, 2):
            for S in combinations(supp, size):
                row = np.zeros(n, dtype=np.int64)
                row[supp] = -1
                row[list(S)] = 1
                A.append(row)
                b.append(size - 1)
                prov.append(("forbidden", j, S))
    for i in range(n):
        row = np.zeros(n, dtype=np.int64)
        row[i] = -1
        A.append(row)
        b.append(0)
        prov.append(("lower", i))
    for i in range(n):
        row = np.zeros(n, dtype=np.int64)
        row[i] = 1
        A.append(row)
        b.append(1)
        prov.append(("upper", i))
    A = np.array(A, dtype=np.int64).reshape(-1, n)
    return PolytopeSystem(n, A, np.array(b, dtype=np.int64), tuple(prov))
