"""Frozen elimination conventions plus randomized algebraic laws.

The literal matrices below pin the canonical forms (first-nonzero
pivoting, free-variables-zero solutions, free-variable kernel basis);
any change to the conventions shows up here before it can silently move
every downstream basis.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torloc.linalg import AffineSubspace, Matrix, frac, vec, zero_vec

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_rows=12, max_cols=12):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    entries = draw(st.lists(fracs, min_size=r * c, max_size=r * c))
    return Matrix(r, c, entries)


def test_frac_rejects_floats():
    with pytest.raises(TypeError):
        frac(0.5)
    assert frac("3/2") == Fraction(3, 2)
    assert frac(7) == Fraction(7)


def test_exact_sum_canonicalizes():
    # two routes to the same rational agree bit for bit
    a = frac("1/6") + frac("1/3")
    b = frac("6/4") - frac("1")
    assert a == b == Fraction(1, 2)
    assert str(b) == "1/2"


def test_rref_identity():
    r, pivots = Matrix.identity(2).rref()
    assert r == Matrix.identity(2)
    assert pivots == [0, 1]


def test_rref_hand_example():
    # hand Gaussian elimination: row2 is half of row1
    r, pivots = Matrix.from_rows([[2, 4], [1, 2]]).rref()
    assert r == Matrix.from_rows([[1, 2], [0, 0]])
    assert pivots == [0]


def test_rref_empty():
    r, pivots = Matrix(0, 0, []).rref()
    assert (r.rows, r.cols) == (0, 0)
    assert pivots == []


def test_kernel_of_injective_map_is_empty():
    assert Matrix.identity(3).kernel_basis() == []


def test_kernel_of_zero_map_is_standard_basis():
    got = Matrix.zeros(2, 3).kernel_basis()
    assert got == [vec([1, 0, 0]), vec([0, 1, 0]), vec([0, 0, 1])]


def test_kernel_one_equation():
    # x0 + x1 = 0 with free x1 = 1
    assert Matrix.from_rows([[1, 1]]).kernel_basis() == [vec([-1, 1])]


def test_image_zero():
    assert Matrix.zeros(3, 2).image_basis() == []


def test_image_identity():
    got = Matrix.identity(3).image_basis()
    assert got == [vec([1, 0, 0]), vec([0, 1, 0]), vec([0, 0, 1])]


def test_image_rank_one():
    # pivot columns come from the original matrix, not its rref
    assert Matrix.from_rows([[1, 2], [2, 4]]).image_basis() == [vec([1, 2])]


def test_solve_identity_returns_rhs():
    assert Matrix.identity(3).solve([5, -1, 2]) == vec([5, -1, 2])


def test_solve_underdetermined_sets_free_vars_to_zero():
    assert Matrix.from_rows([[1, 1]]).solve([2]) == vec([2, 0])


def test_solve_inconsistent_is_none():
    assert Matrix.from_rows([[0]]).solve([1]) is None


def test_solve_rejects_wrong_length():
    with pytest.raises(ValueError):
        Matrix.identity(2).solve([1])


@settings(max_examples=60)
@given(matrices())
def test_kernel_vectors_are_annihilated(m):
    for k in m.kernel_basis():
        assert m.apply(k) == zero_vec(m.rows)


@settings(max_examples=60)
@given(matrices())
def test_rank_nullity(m):
    assert m.rank() + len(m.kernel_basis()) == m.cols


@settings(max_examples=60)
@given(matrices())
def test_rref_is_idempotent(m):
    r, pivots = m.rref()
    r2, pivots2 = r.rref()
    assert r2 == r and pivots2 == pivots


@settings(max_examples=60)
@given(matrices())
def test_image_basis_matches_rank(m):
    cols = m.image_basis()
    assert len(cols) == m.rank()
    assert Matrix.from_columns(cols, rows=m.rows).rank() == len(cols)


@settings(max_examples=60)
@given(matrices(max_rows=6, max_cols=6), st.lists(fracs, min_size=6, max_size=6))
def test_solve_solutions_are_exact(m, coeffs):
    # build a guaranteed-consistent rhs, then check m x = b on the answer
    b = m.apply(vec(coeffs[: m.cols]))
    x = m.solve(b)
    assert x is not None
    assert m.apply(x) == b


def test_affine_base_point_has_zero_coordinates():
    s = AffineSubspace(3, [1, 2, 3], [[1, 0, 0], [0, 1, 0]])
    assert s.membership([1, 2, 3]) == zero_vec(2)


def test_affine_first_direction_is_unit_coordinate():
    s = AffineSubspace(3, [1, 2, 3], [[1, 0, 0], [0, 1, 0]])
    assert s.membership([2, 2, 3]) == vec([1, 0])


def test_affine_point_outside_span():
    s = AffineSubspace(3, [0, 0, 0], [[1, 0, 0]])
    assert s.membership([0, 1, 0]) is None
    assert not s.contains([0, 1, 0])


def test_affine_rejects_dependent_directions():
    with pytest.raises(ValueError):
        AffineSubspace(2, [0, 0], [[1, 1], [2, 2]])


def test_affine_singleton_contains_only_base():
    s = AffineSubspace(2, [1, 1], [])
    assert s.dim == 0
    assert s.membership([1, 1]) == ()
    assert s.membership([1, 2]) is None


@settings(max_examples=40)
@given(
    st.lists(fracs, min_size=3, max_size=3),
    st.lists(fracs, min_size=2, max_size=2),
)
def test_affine_membership_roundtrip(base, coeffs):
    s = AffineSubspace(3, base, [[1, 0, 2], [0, 1, -1]])
    p = s.point_at(coeffs)
    assert s.membership(p) == vec(coeffs)
