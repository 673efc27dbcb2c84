"""GF(2) polynomial matrices, circulant expansion and non-negative polynomial vectors.

A binary polynomial is a ``frozenset`` of exponents. A :class:`BinPolyMatrix`
carries an optional modulus ``r``: when present the entries live in
GF(2)[X]/(X^r - 1) (quasi-cyclic semantics), otherwise in GF(2)[D]
(convolutional semantics).

Scalar binary matrices are plain ``numpy`` ``uint8`` arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

BinPoly = frozenset


def binpoly(*exponents: int) -> frozenset:
    """Build a GF(2) polynomial; repeated exponents cancel in pairs."""
    out: set = set()
    for e in exponents:
        if e < 0:
            raise ValueError("exponents must be non-negative")
        out ^= {e}
    return frozenset(out)


def binpoly_mod(p: Iterable[int], r: int) -> frozenset:
    """Reduce a binary polynomial modulo X^r - 1 over GF(2)."""
    if r < 1:
        raise ValueError("modulus r must be >= 1")
    return binpoly(*(e % r for e in p))


def binpoly_mul(p: Iterable[int], q: Iterable[int], r: Optional[int] = None) -> frozenset:
    prod = binpoly(*(a + b for a in p for b in q))
    return prod if r is None else binpoly_mod(prod, r)


@dataclass(frozen=True)
class BinPolyMatrix:
    """J x L matrix over GF(2)[X], optionally reduced modulo X^r - 1."""

    entries: tuple
    modulus: Optional[int] = None

    def __post_init__(self):
        rows = tuple(tuple(frozenset(int(e) for e in p) for p in row) for row in self.entries)
        if not rows or not rows[0]:
            raise ValueError("matrix needs J >= 1 and L >= 1")
        if any(len(row) != len(rows[0]) for row in rows):
            raise ValueError("ragged polynomial matrix")
        for row in rows:
            for p in row:
                if any(e < 0 for e in p):
                    raise ValueError("negative exponent")
                if self.modulus is not None and any(e >= self.modulus for e in p):
                    raise ValueError(f"exponent not reduced modulo X^{self.modulus}-1")
        if self.modulus is not None and self.modulus < 1:
            raise ValueError("modulus r must be >= 1")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_exponents(cls, table, modulus: Optional[int] = None, reduce: bool = False):
        """Build from nested lists where each entry is ``None`` (zero), an int, or an
        iterable of ints."""
        rows = []
        for row in table:
            out = []
            for entry in row:
                if entry is None:
                    p = frozenset()
                elif isinstance(entry, int):
                    p = binpoly(entry)
                else:
                    p = binpoly(*entry)
                if reduce and modulus is not None:
                    p = binpoly_mod(p, modulus)
                out.append(p)
            rows.append(tuple(out))
        return cls(tuple(rows), modulus)

    @property
    def shape(self) -> tuple:
        return len(self.entries), len(self.entries[0])

    @property
    def max_degree(self) -> int:
        """Largest exponent present, or -1 for the zero matrix."""
        return max((max(p) for row in self.entries for p in row if p), default=-1)

    def is_monomial(self) -> bool:
        return all(len(p) == 1 for row in self.entries for p in row)

    def with_modulus(self, modulus: Optional[int]) -> "BinPolyMatrix":
        if modulus is None:
            return BinPolyMatrix(self.entries, None)
        return BinPolyMatrix(
            tuple(tuple(binpoly_mod(p, modulus) for p in row) for row in self.entries), modulus
        )

    def to_text(self) -> str:
        return dump_pcm(self)

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True)
class NonnegPolyVec:
    """Length-L vector of polynomials with non-negative real coefficients.

    ``components[l]`` maps degree -> coefficient. Zero coefficients are dropped.
    Coefficients are kept as given (``Fraction``/``int`` for exact work, ``float``
    otherwise).
    """

    components: tuple

    def __post_init__(self):
        comps = []
        for comp in self.components:
            clean = {}
            for deg, coef in dict(comp).items():
                if deg < 0:
                    raise ValueError("negative degree")
                if coef < 0:
                    raise ValueError("coefficients must be non-negative")
                if coef != 0:
                    clean[int(deg)] = coef
            comps.append(dict(sorted(clean.items())))
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def from_coefficients(cls, rows: Sequence[Sequence[Real]]) -> "NonnegPolyVec":
        """``rows[l][i]`` is the coefficient of X^i in component l."""
        return cls(tuple({i: c for i, c in enumerate(row)} for row in rows))

    @classmethod
    def from_scalar(cls, vec: Sequence[Real], L: int) -> "NonnegPolyVec":
        """Inverse of :meth:`to_scalar`: entry ``t*L + l`` is the X^t coefficient of
        component ``l``."""
        vec = list(vec)
        if len(vec) % L:
            raise ValueError("scalar length is not a multiple of L")
        comps = [{} for _ in range(L)]
        for k, c in enumerate(vec):
            if c:
                comps[k % L][k // L] = c
        return cls(tuple(comps))

    def __len__(self):
        return len(self.components)

    @property
    def degree(self) -> int:
        return max((max(c) for c in self.components if c), default=-1)

    def is_zero(self) -> bool:
        return not any(self.components)

    def to_scalar(self, blocks: Optional[int] = None) -> list:
        """Interleaved scalar vector (time-major: block t holds the X^t coefficients)."""
        L = len(self.components)
        blocks = self.degree + 1 if blocks is None else blocks
        out = [0] * (blocks * L)
        for l, comp in enumerate(self.components):
            for deg, c in comp.items():
                if deg >= blocks:
                    raise ValueError("vector does not fit in the requested number of blocks")
                out[deg * L + l] = c
        return out

    def to_circulant_scalar(self, r: int) -> list:
        """Component-major scalar vector matching the circulant block layout
        (component ``l`` occupies positions ``l*r .. l*r + r - 1``)."""
        L = len(self.components)
        out = [0] * (r * L)
        for l, comp in enumerate(self.components):
            for deg, c in comp.items():
                if deg >= r:
                    raise ValueError("degree exceeds circulant size; reduce first")
                out[l * r + deg] = c
        return out

    def coefficients(self) -> list:
        return [c for comp in self.components for c in comp.values()]

    def scale(self, factor) -> "NonnegPolyVec":
        if factor <= 0:
            raise ValueError("scaling factor must be positive")
        return NonnegPolyVec(tuple({d: c * factor for d, c in comp.items()} for comp in self.components))

    def __str__(self):
        return "\n".join(format_nonneg_poly(c) for c in self.components)


def reduce_mod(v: NonnegPolyVec, r: int) -> NonnegPolyVec:
    """Wrap a real polynomial vector modulo X^r - 1 (coefficients summed over the reals)."""
    if r < 1:
        raise ValueError("modulus r must be >= 1")
    comps = []
    for comp in v.components:
        out: dict = {}
        for deg, c in comp.items():
            out[deg % r] = out.get(deg % r, 0) + c
        comps.append(out)
    return NonnegPolyVec(tuple(comps))


def circulant(p: Iterable[int], r: int) -> np.ndarray:
    """r x r binary circulant of ``p``: X^e maps to ones at ``(a, (a - e) mod r)``."""
    M = np.zeros((r, r), dtype=np.uint8)
    rows = np.arange(r)
    for e in p:
        M[rows, (rows - e) % r] ^= 1
    return M


def expand_circulant(m: BinPolyMatrix) -> np.ndarray:
    """Scalar rJ x rL matrix; block (j, l) is the circulant of entry (j, l)."""
    if m.modulus is None:
        raise ValueError("expand_circulant needs a modulus")
    r = m.modulus
    J, L = m.shape
    H = np.zeros((r * J, r * L), dtype=np.uint8)
    for j, row in enumerate(m.entries):
        for l, p in enumerate(row):
            H[j * r:(j + 1) * r, l * r:(l + 1) * r] = circulant(p, r)
    return H


def coefficient_decompose(m: BinPolyMatrix) -> list:
    """Scalar J x L matrices H_0..H_ms with m(X) = sum_i H_i X^i."""
    J, L = m.shape
    top = max(m.max_degree, 0)
    mats = [np.zeros((J, L), dtype=np.uint8) for _ in range(top + 1)]
    for j, row in enumerate(m.entries):
        for l, p in enumerate(row):
            for e in p:
                mats[e][j, l] = 1
    return mats


def syndrome_former_memory(m: BinPolyMatrix) -> int:
    return len(coefficient_decompose(m)) - 1


def permuted_block_form(m: BinPolyMatrix) -> np.ndarray:
    """The interleaved rJ x rL form whose block (a, b) is H_{(a - b) mod r}."""
    if m.modulus is None:
        raise ValueError("permuted_block_form needs a modulus")
    r = m.modulus
    J, L = m.shape
    H = np.zeros((r * J, r * L), dtype=np.uint8)
    for i, Hi in enumerate(coefficient_decompose(m)):
        if not Hi.any():
            continue
        for a in range(r):
            b = (a - i) % r
            H[a * J:(a + 1) * J, b * L:(b + 1) * L] ^= Hi
    return H


def interleave_permutations(J: int, L: int, r: int) -> tuple:
    """Row and column index maps taking the circulant layout to the interleaved one:
    ``permuted[p] = expanded[row_map[p]]`` and likewise for columns."""
    row_map = np.array([j * r + a for a in range(r) for j in range(J)])
    col_map = np.array([l * r + b for b in range(r) for l in range(L)])
    return row_map, col_map


# -- text formats -----------------------------------------------------------

def format_binpoly(p: Iterable[int]) -> str:
    p = sorted(p)
    return "+".join(str(e) for e in p) if p else "-"


def parse_binpoly(tok: str) -> frozenset:
    tok = tok.strip()
    if tok in ("-", ""):
        return frozenset()
    return binpoly(*(int(t) for t in tok.split("+")))


def dump_pcm(m: BinPolyMatrix) -> str:
    J, L = m.shape
    lines = [f"{J} {L} {m.modulus or 0}"]
    for row in m.entries:
        lines.append(" ".join(format_binpoly(p) for p in row))
    return "\n".join(lines) + "\n"


def parse_pcm(text: str) -> BinPolyMatrix:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty .pcm text")
    try:
        J, L, r = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad .pcm header {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != J:
        raise ValueError(f"expected {J} rows, found {len(body)}")
    rows = []
    for ln in body:
        toks = ln.split()
        if len(toks) != L:
            raise ValueError(f"expected {L} entries in row {ln!r}")
        rows.append(tuple(parse_binpoly(t) for t in toks))
    return BinPolyMatrix(tuple(rows), r or None)


def _parse_number(tok: str) -> Fraction:
    # Fraction parses "3", "2/3" and decimal text such as "0.25" exactly
    return Fraction(tok.strip())


def format_nonneg_poly(comp: Mapping) -> str:
    if not comp:
        return "-"
    return "+".join(f"{c}*{d}" for d, c in sorted(comp.items()))


def parse_nonneg_poly(line: str) -> dict:
    """Parse ``3*2+1*3`` (3X^2 + X^3). A bare token ``k`` means X^k with coefficient 1."""
    line = line.strip()
    if line in ("-", "", "0*0"):
        return {}
    out: dict = {}
    for tok in line.split("+"):
        tok = tok.strip()
        if "*" in tok:
            coef, deg = tok.split("*")
            c, d = _parse_number(coef), int(deg)
        else:
            c, d = Fraction(1), int(tok)
        if c < 0:
            raise ValueError("negative coefficient")
        out[d] = out.get(d, 0) + c
    return out


def parse_nonneg_vec(text: str) -> NonnegPolyVec:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    return NonnegPolyVec(tuple(parse_nonneg_poly(ln) for ln in lines if ln))


def parse_scalar_vector(text: str) -> list:
    """Parse ``(4,5,9,8)``, ``4 5 9 8`` or ``4,5,9,8`` into exact fractions."""
    cleaned = text.strip().strip("()[]").replace(",", " ")
    return [_parse_number(t) for t in cleaned.split()]
