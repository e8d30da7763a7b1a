import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from igusa_primitives.arith import PadicContext
from igusa_primitives.errors import DomainError, NotDepleted
from igusa_primitives.genus1 import (
    QSeries1,
    from_qseries,
    is_p_depleted,
    p_deplete,
    serre_theta,
    solve_weight_k,
    theta_inverse_1,
    to_qseries,
)
from igusa_primitives.qseries import theta


def closed_form(k, f, i):
    """F_i = sum a_n (-1)^i (k-2)!/(k-2-i)! n^-(i+1) q^n."""
    factor = Fraction((-1) ** i * factorial(k - 2), factorial(k - 2 - i))
    return QSeries1({n: factor * a / n ** (i + 1) for n, a in f.terms.items()}, f.truncation, f.N)


def test_weight3_p2_example():
    F0, F1 = solve_weight_k(3, QSeries1({1: 1}, 1), 2)
    assert F0 == QSeries1({1: 1}, 1)
    assert F1 == QSeries1({1: -1}, 1)


def test_depletion_and_inverse():
    f = QSeries1({1: 1, 2: 3, 3: 5, 6: 7, 0: 2}, 10)
    assert p_deplete(f, 3) == QSeries1({1: 1, 2: 3}, 10)
    assert is_p_depleted(p_deplete(f, 3), 3)
    with pytest.raises(NotDepleted):
        theta_inverse_1(f, 3)
    assert serre_theta(theta_inverse_1(p_deplete(f, 3), 3)) == p_deplete(f, 3)


def test_rejects_bad_inputs():
    with pytest.raises(DomainError):
        p_deplete(QSeries1({1: 1}), 4)
    with pytest.raises(DomainError):
        solve_weight_k(1, QSeries1({1: 1}), 3)
    with pytest.raises(ValueError):
        QSeries1({Fraction(1, 2): 1}, N=1)


def test_fractional_exponents_with_level():
    f = QSeries1({Fraction(1, 5): 2, Fraction(3, 5): 1, Fraction(7, 5): 4}, 2, N=5)
    assert p_deplete(f, 3) == QSeries1({Fraction(1, 5): 2, Fraction(7, 5): 4}, 2, N=5)
    assert theta_inverse_1(p_deplete(f, 3), 3).terms[Fraction(1, 5)] == 10


def test_embedding_round_trip_and_theta():
    ctx = PadicContext(5, 20, 1, 1)
    f = QSeries1({1: 2, 3: -1, 4: Fraction(1, 2)}, 6)
    s = to_qseries(f, ctx)
    assert from_qseries(s) == f
    assert from_qseries(theta(1, s)) == serre_theta(f)


def test_json_round_trip():
    f = QSeries1({1: 2, 7: Fraction(-3, 4)}, 9)
    assert QSeries1.from_json(f.to_json()) == f


@settings(max_examples=40)
@given(st.integers(2, 10), st.integers(0, 10**6), st.sampled_from([2, 3, 5, 7]))
def test_recursion_matches_closed_form(k, seed, p):
    rng = random.Random(seed)
    f = p_deplete(QSeries1({n: rng.randint(-5, 5) for n in range(1, 12)}, 12), p)
    components = solve_weight_k(k, f, p)
    assert len(components) == k - 1
    assert all(F == closed_form(k, f, i) for i, F in enumerate(components))
    assert serre_theta(components[0]) == f
    for i in range(1, k - 1):
        assert serre_theta(components[i]) == components[i - 1].scale(-(k - 1 - i))
