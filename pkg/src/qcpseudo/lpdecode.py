"""Exact LP decoding over the fundamental polytope and the lambda(alpha, beta) experiment."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import log10
from typing import Optional, Sequence

import numpy as np

from .cone import PolytopeSystem, build_polytope
from .simplex import solve_lp
from .weights import exact


def rationalize_llr(values: Sequence, precision: Optional[int] = None) -> list:
    """Exact LLRs: text and ints are read exactly, floats through their shortest
    decimal repr; ``precision`` instead caps the denominator."""
    out = []
    for v in values:
        if isinstance(v, str):
            q = Fraction(v.strip())
        elif isinstance(v, (float, np.floating)):
            if not np.isfinite(v):
                raise ValueError("LLR entries must be finite")
            q = Fraction(repr(float(v)))
        else:
            q = exact(v)
        if precision is not None:
            q = q.limit_denominator(precision)
        out.append(q)
    return out


@dataclass
class LpDecodeResult:
    omega: list                    # exact optimizer
    objective: Fraction
    integral: bool
    tie_broken: bool = False       # alternative optima were resolved lexicographically
    pivots: int = 0

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.omega)

    @property
    def hard(self) -> np.ndarray:
        """0/1 vector when integral; fractional coordinates round to 1 if > 1/2."""
        return np.array([1 if v > Fraction(1, 2) else 0 for v in self.omega], dtype=np.uint8)


def _rows(poly: PolytopeSystem) -> tuple:
    A = [{int(j): int(a) for j, a in zip(np.flatnonzero(row), row[np.flatnonzero(row)])} for row in poly.A]
    keep = [k for k, p in enumerate(poly.provenance) if p[0] != "lower"]   # x >= 0 is implicit
    return [A[k] for k in keep], [int(poly.b[k]) for k in keep]


def lp_decode(H, llr: Sequence, precision: Optional[int] = None, polytope: Optional[PolytopeSystem] = None,
              lexicographic: bool = True) -> LpDecodeResult:
    """Minimize llr . w over the fundamental polytope of ``H`` in exact arithmetic.

    Ties between optimal vertices go to the lexicographically smallest one,
    found by re-optimizing one coordinate at a time on the optimal face.
    """
    poly = polytope if polytope is not None else build_polytope(np.asarray(H, dtype=np.uint8))
    lam = rationalize_llr(llr, precision)
    if len(lam) != poly.n:
        raise ValueError(f"LLR length {len(lam)} does not match n = {poly.n}")
    A_ub, b_ub = _rows(poly)
    res = solve_lp(lam, A_ub, b_ub)
    if not res.ok:
        raise RuntimeError(f"LP decoding failed: {res.status}")
    omega, pivots, tie = res.x, res.pivots, False
    if lexicographic and res.degenerate_optimum:
        eqs, rhs = [{j: v for j, v in enumerate(lam) if v}], [res.value]
        for i in range(poly.n):
            if omega[i] == 0:
                # already at its lower bound on the optimal face
                eqs.append({i: 1})
                rhs.append(0)
                continue
            sub = solve_lp([1 if j == i else 0 for j in range(poly.n)], A_ub, b_ub, eqs, rhs)
            pivots += sub.pivots
            eqs.append({i: 1})
            rhs.append(sub.value)
            if sub.x != omega:
                tie = True
            omega = sub.x
    integral = all(v in (0, 1) for v in omega)
    return LpDecodeResult(list(omega), res.value, integral, tie, pivots)


def lambda_alpha_beta(omega: Sequence, alpha, beta) -> list:
    """beta * (1 - 2 alpha (||w||_1 / ||w||_2^2) w), exact for rational inputs."""
    w = [exact(v) for v in omega]
    if not any(w):
        raise ValueError("omega must be nonzero")
    alpha, beta = exact(alpha), exact(beta)
    if beta <= 0:
        raise ValueError("beta must be positive")
    l1 = sum(w)
    l2sq = sum(v * v for v in w)
    scale = 2 * alpha * l1 / l2sq
    return [beta * (1 - scale * v) for v in w]


def ebn0_db(beta: float, rate: float) -> float:
    """Eb/N0 in dB for the lambda(alpha, beta) scaling, Eb/N0 = beta / (4 R)."""
    return 10 * log10(beta / (4 * rate))


def polytope_scale(poly: PolytopeSystem, omega: Sequence) -> Fraction:
    """Largest s with s * omega in the polytope (omega a cone member)."""
    w = [exact(v) for v in omega]
    s = None
    for row, b in zip(poly.A, poly.b):
        dot = sum(int(row[j]) * w[j] for j in np.flatnonzero(row))
        if dot > 0:
            t = Fraction(int(b)) / dot
            if s is None or t < s:
                s = t
    if s is None:
        raise ValueError("omega must be nonzero")
    return s


@dataclass
class BoundaryRow:
    alpha: Fraction
    objective: Fraction            # lambda . (s omega) at the scaled pseudo-codeword
    winner: str                    # zero | tie | pseudocodeword
    lp_objective: Optional[Fraction] = None
    # False when some other direction beats both zero and omega at this alpha
    argmin_consistent: Optional[bool] = None


@dataclass
class BoundaryReport:
    rows: list = field(default_factory=list)

    @property
    def flips_at_half(self) -> bool:
        for row in self.rows:
            expect = "zero" if row.alpha < Fraction(1, 2) else "tie" if row.alpha == Fraction(1, 2) else "pseudocodeword"
            if row.winner != expect:
                return False
        return True

    @property
    def globally_consistent(self) -> bool:
        return all(r.argmin_consistent is not False for r in self.rows)


def boundary_experiment(H, omega: Sequence, alphas: Sequence, beta=1, decode: bool = True) -> BoundaryReport:
    """Compare the zero codeword against the scaled pseudo-codeword under lambda(alpha, beta)."""
    poly = build_polytope(np.asarray(H, dtype=np.uint8))
    s = polytope_scale(poly, omega)
    point = [s * exact(v) for v in omega]
    report = BoundaryReport()
    for a in alphas:
        a = exact(a) if not isinstance(a, float) else Fraction(repr(a))
        lam = lambda_alpha_beta(omega, a, beta)
        obj = sum(l * p for l, p in zip(lam, point))
        winner = "zero" if obj > 0 else "tie" if obj == 0 else "pseudocodeword"
        row = BoundaryRow(a, obj, winner)
        if decode:
            res = lp_decode(H, lam, polytope=poly, lexicographic=False)
            row.lp_objective = res.objective
            row.argmin_consistent = res.objective == min(Fraction(0), obj)
        report.rows.append(row)
    return report


def parse_alpha_grid(spec: str) -> list:
    """``start:stop:step`` (inclusive, exact decimals) or a comma list."""
    if ":" in spec:
        a, b, st = (Fraction(t) for t in spec.split(":"))
        if st <= 0:
            raise ValueError("grid step must be positive")
        out, x = [], a
        while x <= b:
            out.append(x)
            x += st
        return out
    return [Fraction(t) for t in spec.split(",") if t.strip()]
