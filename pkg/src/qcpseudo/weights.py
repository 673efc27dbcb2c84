"""Pseudo-weights of a single non-negative vector."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

MEASURES = ("awgnc", "bec", "bsc", "maxfrac", "frac")
_ALIASES = {"max_frac": "maxfrac", "max-frac": "maxfrac", "awgn": "awgnc"}


def canonical_measure(name: str) -> str:
    key = _ALIASES.get(name.lower(), name.lower())
    if key not in MEASURES:
        raise ValueError(f"unknown measure {name!r}; choose from {MEASURES}")
    return key


def exact(v) -> Fraction:
    """Fraction from Python or numpy scalars (numpy ints would overflow inside Fraction)."""
    if isinstance(v, np.integer):
        return Fraction(int(v))
    if isinstance(v, np.floating):
        return Fraction(float(v))
    return Fraction(v)


def _coerce(vec):
    """Keep floats as floats, everything else exact."""
    vals = list(vec)
    if any(isinstance(v, (float, np.floating)) for v in vals):
        return [float(v) for v in vals]
    return [exact(v) for v in vals]


def bsc_weight(vec: Sequence) -> Fraction:
    """2e where F(e) = F(n)/2 and F integrates the non-increasing rearrangement."""
    w = sorted(_coerce(vec), reverse=True)
    total = sum(w, 0 * w[0]) if w else 0
    if not w or total == 0:
        return 0 * total
    half = total / 2
    cum = 0 * total
    for k, x in enumerate(w):
        if cum + x >= half:
            return 2 * (k + (half - cum) / x)
        cum += x
    raise AssertionError("unreachable: cumulative sum never reached half")


@dataclass(frozen=True)
class WeightReport:
    awgnc: object
    bec: int
    bsc: object
    maxfrac: object
    frac: object

    @property
    def max_frac(self):
        return self.maxfrac

    def value(self, measure: str):
        return getattr(self, canonical_measure(measure))

    def rounded(self, digits: int = 2) -> dict:
        return {m: round(float(self.value(m)), digits) for m in MEASURES}

    def as_dict(self) -> dict:
        return {m: self.value(m) for m in MEASURES}


def weight_report(vec: Sequence) -> WeightReport:
    w = _coerce(vec)
    if any(x < 0 for x in w):
        raise ValueError("pseudo-weights need a non-negative vector")
    zero = 0.0 if w and isinstance(w[0], float) else Fraction(0)
    l1 = sum(w, zero)
    if l1 == 0:
        return WeightReport(zero, 0, zero, zero, zero)
    l2sq = sum((x * x for x in w), zero)
    return WeightReport(
        awgnc=l1 * l1 / l2sq,
        bec=sum(1 for x in w if x != 0),
        bsc=bsc_weight(w),
        maxfrac=l1 / max(w),
        frac=l1,
    )


def pseudoweight(vec: Sequence, measure: str):
    return weight_report(vec).value(measure)


def format_value(v) -> str:
    """Exact fraction followed by the 2-decimal rounding, e.g. ``20/3 (6.67)``."""
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v} ({float(v):.2f})"
    if isinstance(v, int):
        return str(v)
    return f"{v:.2f}"
