"""Named parity-check matrices used throughout the tests and the CLI."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .polys import BinPolyMatrix, NonnegPolyVec

# (3,4)-regular monomial family; the last entry of row 3 reads X^2 after the X^4, X^3
_EX11 = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 4, 3, 2]]


def trivial3() -> BinPolyMatrix:
    """Length-3 code {000}, viewed as a 1 x 1 circulant family (r = 1)."""
    return BinPolyMatrix.from_exponents([[0, 0, None], [0, 0, 0], [None, 0, 0]], modulus=1)


def single_check3() -> BinPolyMatrix:
    """H = [1 1 1]."""
    return BinPolyMatrix.from_exponents([[0, 0, 0]], modulus=1)


def cubic_cover() -> BinPolyMatrix:
    """The r = 3 polynomial matrix whose circulant expansion is a cubic cover of trivial3."""
    return BinPolyMatrix.from_exponents([[0, 0, None], [2, 0, 1], [None, 0, 0]], modulus=3)


def conv_335() -> BinPolyMatrix:
    """cubic_cover unwrapped: a convolutional matrix with syndrome former memory 2."""
    return cubic_cover().with_modulus(None)


def ex5_conv() -> BinPolyMatrix:
    """Rate-1/4 (3,4)-regular monomial convolutional matrix, memory 4."""
    return BinPolyMatrix.from_exponents(_EX11)


def ex11_qc(r: int) -> BinPolyMatrix:
    return BinPolyMatrix.from_exponents(_EX11, modulus=r, reduce=True)


def ex5_omega() -> NonnegPolyVec:
    """Pseudo-codeword (3D^2 + D^3, 4D + D^2, 3 + D + 4D^2 + D^3, 3 + 4D + D^2)."""
    return NonnegPolyVec.from_coefficients(
        [[0, 0, 3, 1], [0, 4, 1], [3, 1, 4, 1], [3, 4, 1]]
    )


FIXTURES = {
    "trivial3": trivial3,
    "single-check3": single_check3,
    "cubic-cover": cubic_cover,
    "conv-335": conv_335,
    "ex5-conv": ex5_conv,
    "ex11-qc": ex11_qc,
}


def get_fixture(name: str, r: Optional[int] = None) -> BinPolyMatrix:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}")
    if name == "ex11-qc":
        return ex11_qc(5 if r is None else r)
    m = FIXTURES[name]()
    return m


def as_fractions(vec) -> list:
    return [Fraction(v) for v in vec]
