from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcm3.algebra import det, signature
from gcm3.gcm import (
    AsymmetricZero,
    BadDiagonal,
    Decomposable,
    DivisibilityViolation,
    LengthMismatch,
    NotSymmetrizable,
    PositiveOffDiagonal,
    RealizationMatrix,
    emit_realization,
    gram_of,
    is_hyperbolic,
    symmetrize,
    twist,
    validate_gcm,
)
from gcm3.lattice import TRIANGLE_GRAM, A, B, C


def test_validate_examples():
    m = validate_gcm([[2, -1], [-1, 2]])
    assert m.indecomposable
    with pytest.raises(Decomposable) as exc:
        validate_gcm([[2, 0], [0, 2]])
    assert exc.value.partition == ((0,), (1,))
    assert not validate_gcm([[2, 0], [0, 2]], allow_decomposable=True).indecomposable
    with pytest.raises(AsymmetricZero):
        validate_gcm([[2, -1], [0, 2]])
    with pytest.raises(BadDiagonal):
        validate_gcm([[1, -1], [-1, 2]])
    with pytest.raises(PositiveOffDiagonal):
        validate_gcm([[2, 1], [1, 2]])


def test_symmetrize_examples():
    eps, b = symmetrize([[2, -1, 0], [-1, 2, -1], [0, -1, 2]])
    assert eps == (1, 1, 1)
    assert b == ((2, -1, 0), (-1, 2, -1), (0, -1, 2))
    eps, b = symmetrize([[2, -2], [-1, 2]])
    assert eps == (1, Fraction(1, 2))
    assert b == ((2, -2), (-2, 4))
    a = [[2, -2], [-1, 2]]
    assert all(a[i][j] == eps[i] * b[i][j] for i in range(2) for j in range(2))


def test_symmetrize_inconsistent_cycle():
    # products around the cycle: a12 a23 a31 = -1, a21 a32 a13 = -2
    with pytest.raises(NotSymmetrizable):
        symmetrize([[2, -1, -1], [-1, 2, -1], [-2, -1, 2]])


def test_is_hyperbolic_examples():
    assert is_hyperbolic(TRIANGLE_GRAM)
    assert not is_hyperbolic([[2, 0, 0], [0, 2, 0], [0, 0, 2]])
    assert not is_hyperbolic([[2, -2], [-2, 2]])


def test_twist_examples():
    b = [[2, -1], [-1, 2]]
    assert twist(b, (1, 1)).entries == ((2, -1), (-1, 2))
    assert twist([[2, -2], [-2, 2]], (1, 2)).entries == ((2, -4), (-1, 2))
    with pytest.raises(DivisibilityViolation) as exc:
        twist(b, (1, 2))
    assert exc.value.pair == (1, 0)
    assert "(2,1)" in str(exc.value)
    with pytest.raises(LengthMismatch):
        twist(b, (1, 1, 1))


def test_realization_examples():
    r = emit_realization((A, B, C), (1, 1, 1))
    assert r.rows == [[1, 1, 1], [0, 2, 1]]
    five = [A, B, C, (1, 2, 4), (0, 3, 2)]
    r5 = emit_realization(five, (1, 1, 1, 1, 1))
    assert len(r5.rows) == 3 and all(len(x) == 5 for x in r5.rows)
    with pytest.raises(LengthMismatch):
        emit_realization((A, B, C), (1, 1))
    assert RealizationMatrix.from_dict(r.to_dict()) == r


def test_realization_even_rows_repeat_pairs():
    four = [A, B, C, (1, 2, 4)]
    r = emit_realization(four, (1, 1, 1, 1))
    last = r.rows[-1]
    assert last[0] == last[2] and last[1] == last[3]


def test_realization_rotation_equivariance():
    deltas = [A, B, C, (1, 2, 4), (0, 3, 2)]
    lam = [1, 2, 1, 3, 1]
    base = emit_realization(deltas, lam).rows
    for k in range(5):
        rot = emit_realization(deltas[k:] + deltas[:k], lam[k:] + lam[:k]).rows
        assert rot == [row[k:] + row[:k] for row in base]
        assert emit_realization(deltas[k:] + deltas[:k], lam[k:] + lam[:k]).canonical() == emit_realization(deltas, lam).canonical()
    rev = emit_realization(deltas[::-1], lam[::-1])
    assert rev.canonical() == emit_realization(deltas, lam).canonical()


# symmetric matrices with even positive diagonal and nonpositive off-diagonal
@st.composite
def sym_even(draw, n=3):
    diag = [2 * draw(st.integers(1, 3)) for _ in range(n)]
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = diag[i]
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = -draw(st.integers(0, 12))
    return m


@settings(max_examples=200, deadline=None)
@given(sym_even(), st.lists(st.integers(1, 6), min_size=3, max_size=3))
def test_twist_symmetrize_round_trip(b, lam):
    try:
        a = twist(b, lam)
    except DivisibilityViolation:
        return
    validate_gcm(a.entries, allow_decomposable=True)
    eps, bs = symmetrize(a)
    # Gram of the scaled roots lam_i d_i with (d_i, d_i) = b_ii
    scaled = [[Fraction(lam[i] * lam[j] * b[i][j]) for j in range(3)] for i in range(3)]
    # proportional block by block: each component carries its own constant
    for comp in a.components:
        ratios = {scaled[i][j] / bs[i][j] for i in comp for j in comp if bs[i][j]}
        assert len(ratios) == 1 and ratios.pop() > 0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=3, max_size=3))
def test_untwisted_is_plain_cartan(off):
    x, y, z = (-v for v in off)
    b = [[2, x, y], [x, 2, z], [y, z, 2]]
    assert twist(b, (1, 1, 1)).entries == tuple(tuple(r) for r in b)


@settings(max_examples=300, deadline=None)
@given(sym_even())
def test_hyperbolic_matches_det_sign(b):
    # for a 3x3 form with a positive 1x1 and (when nonsingular) a 2x2 leading minor > 0,
    # one negative square <=> det < 0
    d = det(b)
    minor2 = b[0][0] * b[1][1] - b[0][1] ** 2
    if minor2 > 0:
        assert is_hyperbolic(b) == (d < 0)
    assert is_hyperbolic(b) == (signature(b) == (2, 1, 0))


def test_gram_of():
    assert gram_of((A, B, C)) == [list(r) for r in TRIANGLE_GRAM]
