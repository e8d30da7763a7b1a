from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from igusa_primitives.arith import (
    PadicContext,
    format_fraction,
    invert_unit,
    parse_fraction,
    reduce_mod,
    valuation,
)
from igusa_primitives.errors import InvalidContext, NotAUnit, NotIntegral

CTX3 = PadicContext(3, 2)
CTX5 = PadicContext(5, 3)

nonzero = st.fractions(max_denominator=50).filter(lambda x: x != 0)


def test_valuation_examples():
    assert valuation(Fraction(9, 5), CTX3) == 2
    assert valuation(Fraction(0), CTX5) == float("inf")
    assert valuation(Fraction(1, 3), CTX3) == -1


def test_invert_unit_examples():
    assert invert_unit(Fraction(2, 3), CTX5) == Fraction(3, 2)
    assert invert_unit(-1, PadicContext(7)) == -1
    with pytest.raises(NotAUnit):
        invert_unit(5, CTX5)


def test_reduce_mod_brute_force():
    # the residue of 1/2 mod 9, found by searching
    expected = next(x for x in range(9) if (2 * x) % 9 == 1)
    assert reduce_mod(Fraction(1, 2), CTX3) == expected == 5
    assert reduce_mod(0, CTX5) == 0
    with pytest.raises(NotIntegral):
        reduce_mod(Fraction(1, 3), PadicContext(3, 1))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"p": 2},
        {"p": 9},
        {"p": 3, "N": 3},
        {"p": 5, "N": 10},
        {"p": 5, "precision": 0},
        {"p": 5, "g": 0},
    ],
)
def test_context_rejects_bad_parameters(kwargs):
    with pytest.raises(InvalidContext):
        PadicContext(**kwargs)


def test_context_dimension():
    assert PadicContext(5, g=3).d_g == 6


def test_fraction_text_round_trip():
    assert format_fraction(Fraction(4, 2)) == "2"
    assert format_fraction(Fraction(-3, 6)) == "-1/2"
    assert parse_fraction("-1/2") == Fraction(-1, 2)


@given(nonzero, nonzero)
def test_valuation_is_multiplicative(a, b):
    assert valuation(a * b, CTX5) == valuation(a, CTX5) + valuation(b, CTX5)


@given(nonzero, nonzero)
def test_valuation_ultrametric(a, b):
    assert valuation(a + b, CTX5) >= min(valuation(a, CTX5), valuation(b, CTX5))


@given(nonzero)
def test_unit_inverse_is_exact(c):
    if valuation(c, CTX5) == 0:
        assert c * invert_unit(c, CTX5) == 1


integral = st.builds(
    Fraction, st.integers(-1000, 1000), st.integers(1, 60).filter(lambda d: d % 5)
)


@given(integral, integral)
def test_reduction_is_a_ring_homomorphism(a, b):
    m = CTX5.modulus
    assert reduce_mod(a + b, CTX5) == (reduce_mod(a, CTX5) + reduce_mod(b, CTX5)) % m
    assert reduce_mod(a * b, CTX5) == (reduce_mod(a, CTX5) * reduce_mod(b, CTX5)) % m
