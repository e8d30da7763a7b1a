import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from igusa_primitives.arith import PadicContext
from igusa_primitives.errors import (
    ContextMismatch,
    InvalidContext,
    NonIntegralEigenvalue,
    NotDepleted,
)
from igusa_primitives.fixtures import random_series
from igusa_primitives.qseries import (
    QSeries,
    ThetaPolynomial,
    deplete,
    frobenius,
    index_pairs,
    qs_add,
    qs_mul,
    theta,
    theta_eigenvalue,
    theta_poly,
    theta_poly_inverse,
)

CTX = PadicContext(5, 20, 1, 2)
CTX3 = PadicContext(3, 20, 1, 2)


def mono(matrix, coeff=1, T=8, ctx=CTX):
    return QSeries.monomial(ctx, matrix, coeff, truncation=T)


def test_index_order():
    assert index_pairs(2) == ((0, 0), (1, 1), (0, 1))
    assert index_pairs(3)[3:] == ((0, 1), (0, 2), (1, 2))


def test_eigenvalue_examples():
    mu = [[2, 1], [1, 0]]
    assert theta_eigenvalue(1, mu) == 1
    assert theta_eigenvalue(3, mu) == 1
    assert all(theta_eigenvalue(i, [[0, 0], [0, 0]]) == 0 for i in (1, 2, 3))
    assert theta_eigenvalue(1, [[Fraction(1, 3), 0], [0, 0]]) == Fraction(1, 6)


def test_theta_on_monomials():
    assert theta(1, mono([[4, 0], [0, 0]])) == mono([[4, 0], [0, 0]], 2)
    assert not theta(2, QSeries.constant(CTX, 7, 8))


def test_products():
    mu, nu = [[1, 1], [1, 2]], [[2, 0], [0, 1]]
    assert qs_mul(mono(mu), mono(nu)) == mono([[3, 1], [1, 3]])
    f = mono(mu, 3) + mono(nu, -2)
    assert qs_mul(f, QSeries.constant(CTX, 1, 8)) == f
    one = QSeries.constant(CTX, 1, 8)
    lhs = qs_mul(qs_add(one, mono(mu)), one - mono(mu))
    assert lhs == one - mono([[2, 2], [2, 4]])


def test_truncation_drops_high_trace():
    big = mono([[3, 0], [0, 3]], T=6) * mono([[1, 0], [0, 0]], T=6)
    assert not big
    assert mono([[1, 0], [0, 0]], T=6) * mono([[1, 0], [0, 0]], T=4) == mono([[2, 0], [0, 0]], T=4)


def test_context_checks():
    with pytest.raises(ContextMismatch):
        mono([[1, 0], [0, 0]]) + mono([[1, 0], [0, 0]], ctx=CTX3)
    with pytest.raises(InvalidContext):
        QSeries(CTX, {}, 4, D=5)


def test_mixed_denominators_align():
    a = mono([[Fraction(1, 3), 0], [0, 0]], T=4)
    b = mono([[1, 0], [0, 0]], T=4)
    s = a + b
    assert s.D == 3
    assert s.coefficient([[Fraction(1, 3), 0], [0, 0]]) == 1
    assert s.coefficient([[1, 0], [0, 0]]) == 1


def test_theta_poly_examples():
    T1 = ThetaPolynomial.variable(1, 3)
    f = mono([[2, 0], [0, 0]])
    assert theta_poly(T1, f) == f
    assert not theta_poly(ThetaPolynomial(3, {}), f)


def test_theta_poly_matches_composition():
    rng = random.Random(5)
    P = ThetaPolynomial(3, {(1, 0, 1): 1, (0, 1, 0): 1})
    for _ in range(10):
        f = random_series(rng, CTX, 6, 4)
        assert theta_poly(P, f) == theta(1, theta(3, f)) + theta(2, f)


def test_depletion_keeps_unit_terms():
    P = ThetaPolynomial.variable(3, 3)
    f = mono([[1, 1], [1, 1]], 2, ctx=CTX3) + mono([[1, 3], [3, 1]], 5, ctx=CTX3)
    assert deplete(P, f) == mono([[1, 1], [1, 1]], 2, ctx=CTX3) + QSeries.zero(CTX3, 8)
    assert deplete(P, deplete(P, f)) == deplete(P, f)
    unit = mono([[1, 1], [1, 1]], 2, ctx=CTX3)
    assert deplete(P, unit) == unit


def test_depletion_rejects_negative_valuation():
    P = ThetaPolynomial(3, {(1, 0, 0): Fraction(1, 5)})
    with pytest.raises(NonIntegralEigenvalue):
        deplete(P, mono([[2, 0], [0, 0]]))


def test_inverse_examples():
    T1 = ThetaPolynomial.variable(1, 3)
    f = mono([[2, 0], [0, 0]])
    assert theta_poly_inverse(T1, f) == f
    assert not theta_poly_inverse(T1, QSeries.zero(CTX, 8))
    with pytest.raises(NotDepleted):
        theta_poly_inverse(T1, mono([[10, 0], [0, 0]], T=10))


def test_frobenius_examples():
    mu = [[1, 1], [1, 0]]
    assert frobenius(mono(mu, T=8)) == mono([[5, 5], [5, 0]], T=8)
    assert frobenius(QSeries.constant(CTX, 1, 8)) == QSeries.constant(CTX, 1, 8)


def test_json_round_trip_and_order():
    rng = random.Random(1)
    f = random_series(rng, CTX, 6, 6) + mono([[Fraction(1, 3), 0], [0, 0]], T=6)
    data = f.to_json()
    assert QSeries.from_json(data, CTX) == f
    flat = [[x for row in t["index"] for x in row] for t in data["terms"]]
    assert flat == sorted(flat)
    assert data["truncation"] == "6"


def test_even_support_validator():
    f = mono([[2, 1], [1, 0]]) + mono([[1, 0], [0, 0]])
    assert f.even_support_violations() == [[[1, 0], [0, 0]]]


# property tests

entries = st.integers(-2, 3)


@st.composite
def series(draw, ctx=CTX, T=8):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        key = (draw(st.integers(0, 3)), draw(st.integers(0, 3)), draw(entries))
        terms[key] = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4)))
    return QSeries(ctx, terms, T)


@settings(max_examples=40)
@given(series(), series(), st.integers(1, 3))
def test_theta_is_a_derivation(f, g, i):
    assert theta(i, f * g) == theta(i, f) * g + f * theta(i, g)


@settings(max_examples=40)
@given(series(), st.integers(1, 3), st.integers(1, 3))
def test_thetas_commute(f, i, j):
    assert theta(i, theta(j, f)) == theta(j, theta(i, f))


@settings(max_examples=40)
@given(series(), st.integers(1, 3))
def test_depletion_projector(f, i):
    P = ThetaPolynomial(3, {(1, 0, 0): 1, (0, 1, 1): 1})
    e = deplete(P, f)
    assert deplete(P, e) == e
    assert deplete(P, theta(i, f)) == theta(i, e)
    assert theta_poly(P, theta_poly_inverse(P, e)) == e
    assert theta_poly_inverse(P, theta_poly(P, e)) == e


@settings(max_examples=40)
@given(series(T=12), series(T=12), st.integers(1, 3))
def test_frobenius_ring_map_and_scaling(f, g, i):
    assert frobenius(f * g) == frobenius(f) * frobenius(g)
    assert frobenius(f + g) == frobenius(f) + frobenius(g)
    assert theta(i, frobenius(f)) == frobenius(theta(i, f)) * 5
