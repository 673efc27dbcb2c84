"""Level-one RLT relaxation of max ||w||^2 over a normalized cone section.

The lifted variables are w (length n) and W[j, l] = w_j w_l for j <= l.
Every pair of valid affine inequalities g(w) >= 0, h(w) >= 0 yields the
linear row [g h](w, W) >= 0, and multiplying sum w = 1 by w_j yields
sum_l W[j, l] = w_j. The objective sum_j W[j, j] then over-estimates
||w||^2 on the feasible set.

Node LPs are solved in floating point. Their bounds become rigorous through
weak duality: for any y >= 0 and any equality multipliers mu,
    b.y + beq.mu + max over the variable box of (c - A^T y - Aeq^T mu).x
bounds the LP, and it is evaluated here in exact rationals. Multipliers are
first snapped to small denominators; when the relaxation is tight at the
target the snapped values are usually not exact, and an exact dual is
rebuilt from the float solution's active set instead.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

SNAP_DENOMINATOR = 720720
DUAL_TOL = 1e-9
COST_TOL = 1e-8


def _affine_product(a: dict, alpha, b: dict, beta, widx) -> tuple:
    """Row for (a.w + alpha)(b.w + beta) >= 0 written as -coef . x <= alpha beta."""
    row = defaultdict(int)
    for j, aj in a.items():
        for l, bl in b.items():
            row[int(widx[j, l])] += aj * bl
    for j, aj in a.items():
        row[j] += aj * beta
    for l, bl in b.items():
        row[l] += alpha * bl
    return {k: v for k, v in row.items() if v}, alpha * beta


@dataclass
class NodeSolution:
    status: int                 # 0 optimal, 2 infeasible, other: solver trouble
    value: float = float("nan")
    w: Optional[np.ndarray] = None
    diag: Optional[np.ndarray] = None
    rows: Optional[list] = None
    y: Optional[np.ndarray] = None
    mu: Optional[np.ndarray] = None
    bounds: Optional[list] = None
    reduced: Optional[np.ndarray] = None


class RltRelaxation:
    """RLT relaxation for the integer rows ``G`` (each g . w >= 0) and sum w = 1."""

    def __init__(self, G: np.ndarray):
        G = np.asarray(G, dtype=np.int64)
        n = self.n = G.shape[1]
        iu, ju = np.triu_indices(n)
        widx = np.zeros((n, n), dtype=np.int64)
        widx[iu, ju] = n + np.arange(len(iu))
        widx[ju, iu] = widx[iu, ju]
        self.widx = widx
        self.N = n + len(iu)
        self.factors = [{int(j): int(row[j]) for j in np.flatnonzero(row)} for row in G]
        rows = []
        for i in range(len(G)):
            for k in range(i, len(G)):
                fi, fk = self.factors[i], self.factors[k]
                if len(fi) == 1 and len(fk) == 1 and min(fi.values()) > 0 and min(fk.values()) > 0:
                    continue            # w_j w_l >= 0 is a variable bound
                coef, rhs = _affine_product(fi, 0, fk, 0, widx)
                if coef:
                    rows.append((coef, rhs))
        self.base_rows = rows
        self.base_matrix = self._to_csr(rows)
        eq = []
        for j in range(n):
            row = {int(widx[j, l]): 1 for l in range(n)}
            row[j] = -1
            eq.append((row, 0))
        eq.append(({j: 1 for j in range(n)}, 1))
        self.eq_rows = eq
        self.eq_matrix = self._to_csr(eq)
        self.eq_rhs = np.array([float(r) for _, r in eq])
        self.cost = np.zeros(self.N)
        self.cost[np.diag(widx)] = 1.0
        self._cost_exact = {int(c): 1 for c in np.diag(widx)}

    def _to_csr(self, rows) -> sp.csr_matrix:
        r, c, v = [], [], []
        for i, (coef, _) in enumerate(rows):
            for k, val in coef.items():
                r.append(i)
                c.append(k)
                v.append(float(val))
        return sp.csr_matrix((v, (r, c)), shape=(len(rows), self.N))

    def node_rows(self, lo: Sequence[Fraction], hi: Sequence[Fraction]) -> list:
        """Bound-factor products for the coordinates whose box is not [0, 1]."""
        facs = []
        for j in range(self.n):
            if lo[j] > 0:
                facs.append(({j: 1}, -lo[j]))
            if hi[j] < 1:
                facs.append(({j: -1}, hi[j]))
        rows = []
        for f, t in facs:
            for g in self.factors:
                coef, rhs = _affine_product(f, t, g, 0, self.widx)
                if coef:
                    rows.append((coef, rhs))
        for a in range(len(facs)):
            for b in range(a, len(facs)):
                coef, rhs = _affine_product(facs[a][0], facs[a][1], facs[b][0], facs[b][1], self.widx)
                if coef:
                    rows.append((coef, rhs))
        return rows

    def solve(self, lo: Sequence[Fraction], hi: Sequence[Fraction]) -> NodeSolution:
        extra = self.node_rows(lo, hi)
        rows = self.base_rows + extra
        A = self.base_matrix
        if extra:
            A = sp.vstack([A, self._to_csr(extra)]).tocsr()
        b = np.array([float(r) for _, r in rows])
        bounds = [(lo[j], hi[j]) for j in range(self.n)] + [(Fraction(0), Fraction(1))] * (self.N - self.n)
        res = linprog(-self.cost, A_ub=-A, b_ub=b, A_eq=self.eq_matrix, b_eq=self.eq_rhs,
                      bounds=[(float(a), float(c)) for a, c in bounds], method="highs")
        if res.status != 0:
            return NodeSolution(res.status)
        y = np.maximum(-res.ineqlin.marginals, 0.0)      # multipliers of -coef . x <= rhs
        mu = -res.eqlin.marginals
        reduced = self.cost - (-A).T @ y - self.eq_matrix.T @ mu
        return NodeSolution(0, -res.fun, res.x[:self.n], res.x[np.diag(self.widx)], rows, y, mu,
                            bounds, reduced)

    # -- exact certificates -----------------------------------------------------

    def dual_bound(self, sol: NodeSolution, y: dict, mu: Sequence[Fraction]) -> Fraction:
        """Exact weak-duality bound for multipliers y (row -> value >= 0) and mu."""
        d = defaultdict(Fraction)
        for c, v in self._cost_exact.items():
            d[c] += v
        total = Fraction(0)
        for i, yi in y.items():
            if not yi:
                continue
            coef, rhs = sol.rows[i]
            for k, v in coef.items():
                d[k] += yi * v          # row is -coef . x <= rhs
            total += yi * rhs
        for k, (coef, rhs) in enumerate(self.eq_rows):
            if mu[k]:
                for c, v in coef.items():
                    d[c] -= mu[k] * v
                total += mu[k] * rhs
        for c in range(self.N):
            dc = d.get(c, 0)
            if dc:
                lo, hi = sol.bounds[c]
                total += dc * hi if dc > 0 else dc * lo
        return total

    def certify(self, sol: NodeSolution, target: Fraction) -> Optional[Fraction]:
        """An exact upper bound <= target on the node, or None if none was found."""
        snapped_y = {int(i): Fraction(float(sol.y[i])).limit_denominator(SNAP_DENOMINATOR)
                     for i in np.flatnonzero(sol.y > 0)}
        snapped_mu = [Fraction(float(v)).limit_denominator(SNAP_DENOMINATOR) for v in sol.mu]
        bound = self.dual_bound(sol, snapped_y, snapped_mu)
        if bound <= target:
            return bound
        repaired = self._repair(sol, snapped_y, snapped_mu)
        if repaired is None:
            return None
        bound = self.dual_bound(sol, *repaired)
        return bound if bound <= target else None

    def _repair(self, sol: NodeSolution, guess_y: dict, guess_mu: list) -> Optional[tuple]:
        """Exact multipliers on the float active set with zero reduced cost where the float one vanishes."""
        active = [int(i) for i in np.flatnonzero(sol.y > DUAL_TOL)]
        cols = set(int(c) for c in np.flatnonzero(np.abs(sol.reduced) < COST_TOL))
        eqs = {c: {} for c in cols}
        rhs = {c: Fraction(self._cost_exact.get(c, 0)) for c in cols}
        for i in active:
            for k, v in sol.rows[i][0].items():
                if k in cols:
                    eqs[k][("y", i)] = Fraction(-v)
        for m, (coef, _) in enumerate(self.eq_rows):
            for k, v in coef.items():
                if k in cols:
                    eqs[k][("mu", m)] = Fraction(v)
        guess = {("y", i): guess_y.get(i, Fraction(0)) for i in active}
        guess.update({("mu", m): v for m, v in enumerate(guess_mu)})
        sol_vars = solve_sparse([(eqs[c], rhs[c]) for c in cols], guess)
        if sol_vars is None:
            return None
        y = {i: sol_vars[("y", i)] for i in active}
        if any(v < 0 for v in y.values()):
            return None
        return y, [sol_vars[("mu", m)] for m in range(len(self.eq_rows))]


def solve_sparse(eqs: list, guess: dict) -> Optional[dict]:
    """Exact solution of sparse rational equations; free unknowns keep their guessed values.

    Rows are eliminated sparsest first, pivoting on the unknown that occurs
    in the fewest remaining rows. Returns None if the system is inconsistent.
    """
    active = [(dict(e), Fraction(r)) for e, r in eqs]
    order = []
    while active:
        count = defaultdict(int)
        for e, _ in active:
            for k in e:
                count[k] += 1
        bi = min(range(len(active)), key=lambda i: len(active[i][0]))
        e, r = active.pop(bi)
        if not e:
            if r != 0:
                return None
            continue
        pv = min(e, key=lambda k: (count[k], -abs(e[k])))
        f = e[pv]
        rest = []
        for e2, r2 in active:
            if pv in e2:
                g = e2[pv] / f
                for k, c in e.items():
                    v = e2.get(k, 0) - g * c
                    if v:
                        e2[k] = v
                    else:
                        e2.pop(k, None)
                r2 = r2 - g * r
            if not e2:
                if r2 != 0:
                    return None
                continue
            rest.append((e2, r2))
        active = rest
        order.append((pv, e, r))
    out = {k: v for k, v in guess.items()}
    for pv, e, r in reversed(order):
        out[pv] = (r - sum(c * out[k] for k, c in e.items() if k != pv)) / e[pv]
    return out
