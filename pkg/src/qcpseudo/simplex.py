"""Exact rational two-phase primal simplex.

Solves ``min c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``.
Tableau rows are kept as sparse integer rows (each row scaled by the gcd of its
entries), which avoids the per-operation gcd cost of ``Fraction`` arithmetic.
Pricing is Dantzig's rule until a run of degenerate pivots is seen, then Bland's
rule for the remainder of the solve, which guarantees termination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LpResult:
    status: str
    x: Optional[list] = None
    value: Optional[Fraction] = None
    pivots: int = 0
    # True when some nonbasic column has zero reduced cost at the optimum.
    degenerate_optimum: bool = False
    basis: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        return Fraction(v)
    return Fraction(v)


def _int_row(coeffs: dict, rhs: Fraction) -> tuple:
    """Scale a rational row to coprime integers."""
    den = rhs.denominator
    for v in coeffs.values():
        den = lcm(den, v.denominator)
    row = {j: int(v * den) for j, v in coeffs.items() if v}
    b = int(rhs * den)
    g = gcd(b, *row.values()) if row else abs(b)
    if g > 1:
        row = {j: v // g for j, v in row.items()}
        b //= g
    return row, b


def _sparse(row) -> dict:
    if isinstance(row, dict):
        return {int(j): _as_fraction(v) for j, v in row.items() if v}
    return {j: _as_fraction(v) for j, v in enumerate(row) if v}


class _Tableau:
    def __init__(self, rows, rhs, basis, ncols):
        self.rows = rows          # list of dict col -> int
        self.rhs = rhs            # list of int
        self.basis = basis        # list of basic column per row
        self.ncols = ncols
        self.obj = {}
        self.zden = 1
        self.zrhs = 0
        self.pivots = 0
        self.bland = False
        self.degenerate_run = 0

    def set_objective(self, cost: dict):
        """Install ``min sum cost[j] x_j`` (rational costs) and price out the basis."""
        den = 1
        for v in cost.values():
            den = lcm(den, v.denominator)
        obj = {j: int(v * den) for j, v in cost.items() if v}
        zden, zrhs = den, 0
        for i, b in enumerate(self.basis):
            cb = obj.get(b, 0)
            if not cb:
                continue
            row = self.rows[i]
            d = row[b]
            # obj := d*obj - cb*row
            new = {j: d * v for j, v in obj.items()}
            for j, v in row.items():
                nv = new.get(j, 0) - cb * v
                if nv:
                    new[j] = nv
                else:
                    new.pop(j, None)
            obj = new
            zden *= d
            zrhs = d * zrhs - cb * self.rhs[i]
            g = gcd(zden, zrhs, *obj.values())
            if g > 1:
                obj = {j: v // g for j, v in obj.items()}
                zden //= g
                zrhs //= g
        self.obj, self.zden, self.zrhs = obj, zden, zrhs

    @property
    def value(self) -> Fraction:
        # objective row reads  sum p_j x_j - zden z = zrhs
        return Fraction(-self.zrhs, self.zden)

    def _entering(self, allowed) -> Optional[int]:
        best, best_v = None, 0
        for j, v in self.obj.items():
            if v < 0 and allowed(j):
                if self.bland:
                    if best is None or j < best:
                        best = j
                elif v < best_v or (v == best_v and best is not None and j < best):
                    best, best_v = j, v
        return best

    def _leaving(self, q) -> Optional[int]:
        best = None
        bnum = bden = 0
        for i, row in enumerate(self.rows):
            a = row.get(q, 0)
            if a <= 0:
                continue
            num = self.rhs[i]
            if best is None:
                best, bnum, bden = i, num, a
                continue
            lhs, rhs = num * bden, bnum * a
            if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                best, bnum, bden = i, num, a
        return best

    def pivot(self, p: int, q: int):
        prow = self.rows[p]
        a = prow[q]
        if a < 0:
            prow = {j: -v for j, v in prow.items()}
            self.rhs[p] = -self.rhs[p]
            a = -a
            self.rows[p] = prow
        pb = self.rhs[p]
        for i, row in enumerate(self.rows):
            if i == p:
                continue
            f = row.get(q, 0)
            if not f:
                continue
            new = {j: a * v for j, v in row.items()}
            for j, v in prow.items():
                nv = new.get(j, 0) - f * v
                if nv:
                    new[j] = nv
                else:
                    del new[j]
            b = a * self.rhs[i] - f * pb
            g = gcd(b, *new.values())
            if g > 1:
                new = {j: v // g for j, v in new.items()}
                b //= g
            self.rows[i] = new
            self.rhs[i] = b
        f = self.obj.get(q, 0)
        if f:
            new = {j: a * v for j, v in self.obj.items()}
            for j, v in prow.items():
                nv = new.get(j, 0) - f * v
                if nv:
                    new[j] = nv
                else:
                    del new[j]
            zden = a * self.zden
            zrhs = a * self.zrhs - f * pb
            g = gcd(zden, zrhs, *new.values())
            if g > 1:
                new = {j: v // g for j, v in new.items()}
                zden //= g
                zrhs //= g
            self.obj, self.zden, self.zrhs = new, zden, zrhs
        self.basis[p] = q
        self.pivots += 1

    def run(self, allowed=lambda j: True, degenerate_limit: int = 50, max_pivots: int = 1_000_000) -> str:
        while True:
            q = self._entering(allowed)
            if q is None:
                return OPTIMAL
            p = self._leaving(q)
            if p is None:
                return UNBOUNDED
            if self.rhs[p] == 0:
                self.degenerate_run += 1
                if self.degenerate_run >= degenerate_limit:
                    self.bland = True
            else:
                self.degenerate_run = 0
            self.pivot(p, q)
            if self.pivots > max_pivots:
                raise RuntimeError("simplex pivot limit exceeded")

    def primal(self, n: int) -> list:
        x = [Fraction(0)] * n
        for i, b in enumerate(self.basis):
            if b < n:
                x[b] = Fraction(self.rhs[i], self.rows[i][b])
        return x


def solve_lp(
    c: Sequence,
    A_ub: Optional[Sequence] = None,
    b_ub: Optional[Sequence] = None,
    A_eq: Optional[Sequence] = None,
    b_eq: Optional[Sequence] = None,
    maximize: bool = False,
    degenerate_limit: int = 50,
) -> LpResult:
    """Exact LP over the non-negative orthant.

    Rows may be dense sequences or sparse ``{column: value}`` dicts. Values may be
    ints, ``Fraction`` or floats (floats are taken at their exact binary value).
    """
    n = len(c)
    cost = {j: _as_fraction(v) for j, v in enumerate(c) if v}
    if maximize:
        cost = {j: -v for j, v in cost.items()}
    A_ub = [] if A_ub is None else list(A_ub)
    b_ub = [] if b_ub is None else list(b_ub)
    A_eq = [] if A_eq is None else list(A_eq)
    b_eq = [] if b_eq is None else list(b_eq)
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("row/rhs count mismatch")

    rows, rhs, basis = [], [], []
    ncols = n
    artificial = []
    for row, b in zip(A_ub, b_ub):
        coeffs = _sparse(row)
        if any(j >= n or j < 0 for j in coeffs):
            raise ValueError("column index out of range")
        b = _as_fraction(b)
        slack = ncols
        ncols += 1
        coeffs[slack] = Fraction(1)
        if b < 0:
            coeffs = {j: -v for j, v in coeffs.items()}
            b = -b
            art = ncols
            ncols += 1
            coeffs[art] = Fraction(1)
            artificial.append(art)
            basic = art
        else:
            basic = slack
        r, bi = _int_row(coeffs, b)
        rows.append(r)
        rhs.append(bi)
        basis.append(basic)
    for row, b in zip(A_eq, b_eq):
        coeffs = _sparse(row)
        b = _as_fraction(b)
        if b < 0:
            coeffs = {j: -v for j, v in coeffs.items()}
            b = -b
        art = ncols
        ncols += 1
        coeffs[art] = Fraction(1)
        artificial.append(art)
        r, bi = _int_row(coeffs, b)
        rows.append(r)
        rhs.append(bi)
        basis.append(art)

    tab = _Tableau(rows, rhs, basis, ncols)
    art_set = set(artificial)
    if artificial:
        tab.set_objective({a: Fraction(1) for a in artificial})
        tab.run(degenerate_limit=degenerate_limit)
        if tab.value > 0:
            return LpResult(INFEASIBLE, pivots=tab.pivots)
        # drive zero-level artificials out of the basis
        keep = []
        for i in range(len(tab.rows)):
            if tab.basis[i] in art_set:
                q = next((j for j in sorted(tab.rows[i]) if j not in art_set), None)
                if q is None:
                    continue  # redundant equality
                tab.pivot(i, q)
            keep.append(i)
        tab.rows = [{j: v for j, v in tab.rows[i].items() if j not in art_set} for i in keep]
        tab.rhs = [tab.rhs[i] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]
        tab.bland = False
        tab.degenerate_run = 0

    tab.set_objective(cost)
    status = tab.run(allowed=lambda j: j not in art_set, degenerate_limit=degenerate_limit)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED, pivots=tab.pivots)
    value = tab.value
    basic = set(tab.basis)
    degenerate = any(
        j not in basic and j not in art_set and tab.obj.get(j, 0) == 0 for j in range(ncols)
    )
    return LpResult(
        OPTIMAL,
        x=tab.primal(n),
        value=-value if maximize else value,
        pivots=tab.pivots,
        degenerate_optimum=degenerate,
        basis=list(tab.basis),
    )
