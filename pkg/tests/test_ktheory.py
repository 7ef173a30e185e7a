"""Koszul denominators, localized sums, and collapse detection.

The lambda_-1 product has an independent oracle: the alternating sum of
exterior powers, expanded by brute force over index subsets.  The two
must agree on every multiset of weights, repeats included.

Euler characteristics of twisted projective spaces give the end-to-end
check: binomial values in the ample range, zeros in the acyclic window,
and the sign-flipped binomials below it.
"""

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torloc.ktheory import (
    KFixedPoint,
    LaurentPoly,
    LaurentRational,
    MultivariateUnsupported,
    PoleAtOne,
    TrivialCharacter,
    evaluate_at_one,
    fixed_point_sum,
    is_character,
    lambda_minus_one,
    projective_space_dataset,
)


def mono(k, c=1):
    return LaurentPoly(1, {(k,): c})


def poly(terms):
    return LaurentPoly(1, {(k,): c for k, c in terms.items()})


def alternating_exterior_sum(weights):
    """Sum over index subsets of (-1)^|S| t^(sum of the selected weights)."""
    out = {}
    for k in range(len(weights) + 1):
        for combo in itertools.combinations(range(len(weights)), k):
            e = sum(weights[i] for i in combo)
            out[(e,)] = out.get((e,), 0) + (-1) ** k
    return LaurentPoly(1, out)


# -- lambda_-1 ---------------------------------------------------------------


def test_lambda_of_nothing_is_one():
    p = KFixedPoint(LaurentPoly.one(1), [])
    assert lambda_minus_one(p) == LaurentPoly.one(1)


def test_lambda_single_character():
    p = KFixedPoint(LaurentPoly.one(1), [(3,)])
    assert lambda_minus_one(p) == poly({0: 1, 3: -1})


def test_lambda_two_characters():
    p = KFixedPoint(LaurentPoly.one(1), [(1,), (-2,)])
    assert lambda_minus_one(p) == poly({0: 1, 1: -1, -2: -1, -1: 1})


def test_lambda_matches_exterior_expansion_everywhere():
    pool = (-2, -1, 1, 2)
    for size in range(5):
        for weights in itertools.combinations_with_replacement(pool, size):
            p = KFixedPoint(LaurentPoly.one(1), [(w,) for w in weights])
            assert lambda_minus_one(p) == alternating_exterior_sum(weights)


def test_trivial_conormal_is_refused():
    with pytest.raises(TrivialCharacter):
        KFixedPoint(LaurentPoly.one(1), [(1,), (0,)])
    with pytest.raises(TrivialCharacter):
        KFixedPoint(LaurentPoly.one(2), [(0, 0)])


# -- fraction reduction ------------------------------------------------------


def test_geometric_collapse():
    f = LaurentRational(poly({0: 1, 2: -1}), poly({0: 1, 1: -1}))
    assert is_character(f) == poly({0: 1, 1: 1})
    assert str(f) == "t + 1"


def test_monomial_shift_moves_to_numerator():
    f = LaurentRational(poly({-3: 1, -2: 1}), mono(2))
    assert is_character(f) == poly({-5: 1, -4: 1})


def test_open_pole_survives_reduction():
    f = LaurentRational(LaurentPoly.one(1), poly({0: 1, 1: -1}))
    assert is_character(f) is None
    with pytest.raises(PoleAtOne):
        evaluate_at_one(f)


def test_character_dimension_count():
    f = LaurentRational(poly({0: 1, 1: 1, 2: 1}))
    assert evaluate_at_one(f) == 3


def test_zero_denominator_is_refused():
    with pytest.raises(ZeroDivisionError):
        LaurentRational(LaurentPoly.one(1), LaurentPoly.zero(1))


def test_multivariate_stays_unreduced_but_compares():
    one = LaurentPoly.one(2)
    t1 = LaurentPoly.monomial(2, (1, 0))
    f = LaurentRational(one - t1 * t1, one - t1)
    assert f.den != one  # untouched
    assert f == LaurentRational(one + t1)
    with pytest.raises(MultivariateUnsupported):
        is_character(f)


laurent_terms = st.dictionaries(
    st.tuples(st.integers(min_value=-5, max_value=5)),
    st.integers(min_value=-4, max_value=4),
    max_size=4,
)


@st.composite
def laurents(draw, nonzero=False):
    p = LaurentPoly(1, draw(laurent_terms))
    if nonzero and p.is_zero():
        return LaurentPoly.one(1)
    return p


@given(a=laurents(), b=laurents(nonzero=True), c=laurents(nonzero=True))
@settings(max_examples=60)
def test_common_factors_cancel_to_the_same_canonical_form(a, b, c):
    lhs = LaurentRational(a * c, b * c)
    rhs = LaurentRational(a, b)
    assert lhs == rhs
    assert lhs.num == rhs.num and lhs.den == rhs.den


@given(a=laurents(), b=laurents(nonzero=True))
@settings(max_examples=60)
def test_reduced_denominator_is_monic_from_below(a, b):
    f = LaurentRational(a, b)
    assert f.den.terms.get((0,)) == 1
    assert all(e[0] >= 0 for e in f.den.terms)


# -- fixed-point sums --------------------------------------------------------


def test_single_free_orbit_of_the_line():
    # one point, conormal t^-1: the sum is t/(t - 1), not a character
    p = KFixedPoint(LaurentPoly.one(1), [(-1,)])
    f = fixed_point_sum([p])
    assert f == LaurentRational(mono(1, -1), poly({0: 1, 1: -1}))
    assert is_character(f) is None


def test_opposite_fibers_cancel():
    a = KFixedPoint(LaurentPoly.one(1), [(-1,), (2,)])
    b = KFixedPoint(mono(0, -1), [(-1,), (2,)])
    f = fixed_point_sum([a, b])
    assert f.is_zero()
    assert evaluate_at_one(f) == 0


def test_sum_is_order_independent():
    pts = projective_space_dataset(3, 2)
    assert fixed_point_sum(pts) == fixed_point_sum(list(reversed(pts)))


def test_sum_rejects_empty_and_mixed_arity():
    with pytest.raises(ValueError):
        fixed_point_sum([])
    with pytest.raises(ValueError):
        fixed_point_sum(
            [
                KFixedPoint(LaurentPoly.one(1), [(1,)]),
                KFixedPoint(LaurentPoly.one(2), [(1, 0)]),
            ]
        )


# -- projective spaces -------------------------------------------------------


def test_dataset_shape_for_the_line():
    pts = projective_space_dataset(1, 0)
    assert [p.fiber for p in pts] == [LaurentPoly.one(1), LaurentPoly.one(1)]
    assert [p.conormals for p in pts] == [((-1,),), ((1,),)]
    twisted = projective_space_dataset(1, 2)
    assert twisted[0].fiber == LaurentPoly.one(1)
    assert twisted[1].fiber == mono(-2)


def test_dataset_needs_positive_dimension():
    with pytest.raises(ValueError):
        projective_space_dataset(0, 1)


def test_line_sections_form_a_geometric_series():
    for d in range(4):
        f = fixed_point_sum(projective_space_dataset(1, d))
        assert is_character(f) == poly({-k: 1 for k in range(d + 1)})


def test_character_string_for_conic_sections():
    f = fixed_point_sum(projective_space_dataset(1, 2))
    assert str(f) == "1 + t^-1 + t^-2"


def test_euler_characteristic_table():
    for n in (1, 2, 3):
        for d in range(6):
            got = evaluate_at_one(fixed_point_sum(projective_space_dataset(n, d)))
            assert got == math.comb(n + d, n)


def test_acyclic_window():
    for n in (1, 2, 3):
        for d in range(-n, 0):
            got = evaluate_at_one(fixed_point_sum(projective_space_dataset(n, d)))
            assert got == 0


def test_duality_below_the_window():
    for n in (1, 2, 3):
        for d in range(-n - 3, -n):
            got = evaluate_at_one(fixed_point_sum(projective_space_dataset(n, d)))
            assert got == (-1) ** n * math.comb(-d - 1, n)


def test_duality_pairs_exactly():
    # chi(d) and chi(-d - n - 1) differ by the sign (-1)^n
    for n in (1, 2, 3):
        for d in range(4):
            plus = evaluate_at_one(fixed_point_sum(projective_space_dataset(n, d)))
            minus = evaluate_at_one(
                fixed_point_sum(projective_space_dataset(n, -d - n - 1))
            )
            assert minus == (-1) ** n * plus
