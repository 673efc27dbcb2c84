from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcpseudo import gf2
from qcpseudo.fixtures import cubic_cover, ex5_conv, ex5_omega, ex11_qc
from qcpseudo.polys import (BinPolyMatrix, NonnegPolyVec, binpoly, binpoly_mul, circulant, coefficient_decompose,
                            dump_pcm, expand_circulant, format_nonneg_poly, interleave_permutations,
                            parse_nonneg_poly, parse_pcm, parse_scalar_vector, permuted_block_form, reduce_mod,
                            syndrome_former_memory)

EQ2 = np.array([
    [1, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 1, 0, 0, 0, 0, 1],
    [0, 0, 1, 0, 1, 0, 1, 0, 0],
    [1, 0, 0, 0, 0, 1, 0, 1, 0],
    [0, 0, 0, 1, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 1],
])


def test_reduce_mod_example8():
    w = ex5_omega()
    assert reduce_mod(w, 1).coefficients() == [4, 5, 9, 8]
    two = reduce_mod(w, 2)
    assert [two.components[l] for l in range(4)] == [{0: 3, 1: 1}, {0: 1, 1: 4}, {0: 7, 1: 2}, {0: 4, 1: 4}]


def test_reduce_mod_large_modulus_is_identity():
    w = ex5_omega()
    assert reduce_mod(w, 7) == w


def test_reduce_mod_rejects_zero():
    with pytest.raises(ValueError):
        reduce_mod(ex5_omega(), 0)


coef = st.integers(min_value=0, max_value=9)
vecs = st.lists(st.lists(coef, min_size=1, max_size=9), min_size=1, max_size=4)


@settings(max_examples=150, deadline=None)
@given(vecs, st.integers(1, 6), st.integers(1, 4))
def test_reduce_mod_tower_and_l1(rows, r, k):
    v = NonnegPolyVec.from_coefficients(rows)
    assert reduce_mod(reduce_mod(v, k * r), r) == reduce_mod(v, r)
    assert sum(reduce_mod(v, r).coefficients()) == sum(v.coefficients())


def test_expand_circulant_eq2():
    assert np.array_equal(expand_circulant(cubic_cover()), EQ2)


def test_expand_circulant_small():
    assert np.array_equal(expand_circulant(BinPolyMatrix.from_exponents([[0]], 2)), np.eye(2))
    X = expand_circulant(BinPolyMatrix.from_exponents([[1]], 3))
    assert np.array_equal(X, np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]]))
    assert np.array_equal(circulant([1], 3), X)


def test_coefficient_decompose_eq3():
    H0, H1, H2 = coefficient_decompose(cubic_cover())
    assert H0.tolist() == [[1, 1, 0], [0, 1, 0], [0, 1, 1]]
    assert H1.tolist() == [[0, 0, 0], [0, 0, 1], [0, 0, 0]]
    assert H2.tolist() == [[0, 0, 0], [1, 0, 0], [0, 0, 0]]


def test_coefficient_decompose_constant_and_monomial():
    const = BinPolyMatrix.from_exponents([[0, 0], [0, None]], None)
    assert len(coefficient_decompose(const)) == 1
    mats = coefficient_decompose(ex5_conv())
    assert len(mats) == 5
    total = sum(m.astype(int) for m in mats)
    assert total.shape == (3, 4) and (total == 1).all()   # the supports partition all 12 entries
    assert syndrome_former_memory(ex5_conv()) == 4


def test_permuted_block_form_example2():
    P = permuted_block_form(cubic_cover())
    H0, H1, H2 = coefficient_decompose(cubic_cover())
    assert np.array_equal(P[:3], np.hstack([H0, H2, H1]))
    rows, cols = interleave_permutations(3, 3, 3)
    assert np.array_equal(P, EQ2[rows][:, cols])


@pytest.mark.parametrize("r", [5, 7])
def test_permuted_block_form_equivalent(r):
    m = ex11_qc(r)
    E, P = expand_circulant(m), permuted_block_form(m)
    rows, cols = interleave_permutations(3, 4, r)
    assert np.array_equal(P, E[rows][:, cols])
    assert gf2.rank(E) == gf2.rank(P)
    assert sorted(E.sum(0)) == sorted(P.sum(0)) and sorted(E.sum(1)) == sorted(P.sum(1))


def test_identity_permuted_form():
    m = BinPolyMatrix.from_exponents([[0]], 4)
    assert np.array_equal(permuted_block_form(m), np.eye(4))


def test_binpoly_arithmetic():
    assert binpoly_mul(binpoly(0, 1), binpoly(0, 1)) == binpoly(0, 2)       # (1+X)^2 = 1+X^2
    assert binpoly_mul(binpoly(2), binpoly(2), 3) == binpoly(1)


def test_pcm_format_example2():
    text = dump_pcm(cubic_cover())
    assert text.splitlines() == ["3 3 3", "0 0 -", "2 0 1", "- 0 0"]
    assert parse_pcm(text) == cubic_cover()


def test_pcm_parse_errors():
    with pytest.raises(ValueError):
        parse_pcm("")
    with pytest.raises(ValueError):
        parse_pcm("2 2 0\n0 0\n")


def test_nonneg_poly_text():
    assert parse_nonneg_poly("3*2+1*3") == {2: 3, 3: 1}
    assert format_nonneg_poly({2: 3, 3: 1}) == "3*2+1*3"
    assert parse_scalar_vector("(4,5,9,8)") == [4, 5, 9, 8]
    assert parse_scalar_vector("1/3 0.25") == [Fraction(1, 3), Fraction(1, 4)]


def test_nonneg_vec_validation():
    with pytest.raises(ValueError):
        NonnegPolyVec(({0: -1},))


def test_scalar_layouts_roundtrip():
    w = ex5_omega()
    assert NonnegPolyVec.from_scalar(w.to_scalar(), 4) == w
    assert w.to_scalar(4) == [0, 0, 3, 3, 0, 4, 1, 4, 3, 1, 4, 1, 1, 0, 1, 0]
