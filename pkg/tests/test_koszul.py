import random
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from igusa_primitives.koszul import (
    KoszulElement,
    OperatorFamily,
    contraction_section,
    delK,
    delta_bracket,
    delta_dot,
    dK,
    homotopy_defect,
    multiindex_ops,
    multiindices,
)


def matrix_family(mats):
    return OperatorFamily([lambda v, m=m: m @ v for m in mats])


def random_mats(rng, n, dim, commuting=False):
    if commuting:
        return [np.diag([rng.randint(-4, 4) for _ in range(dim)]) for _ in range(n)]
    return [np.array([[rng.randint(-3, 3) for _ in range(dim)] for _ in range(dim)]) for _ in range(n)]


def random_element(rng, n, p, dim):
    return KoszulElement(n, p, {i: np.array([rng.randint(-5, 5) for _ in range(dim)]) for i in multiindices(n, p)})


def same(a: KoszulElement, b: KoszulElement) -> bool:
    return a.degree == b.degree and (a - b).is_zero()


# independent exterior-algebra model: e_k ^ e_i with the sign of the sorting permutation

def permutation_parity(seq):
    seq = list(seq)
    inversions = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return inversions % 2


def wedge_matrix(mats, n, p):
    dim = mats[0].shape[0]
    src, dst = list(combinations(range(1, n + 1), p)), list(combinations(range(1, n + 1), p + 1))
    M = np.zeros((len(dst) * dim, len(src) * dim), dtype=np.int64)
    for c, i in enumerate(src):
        for k in range(1, n + 1):
            if k in i:
                continue
            word = (k,) + i
            r = dst.index(tuple(sorted(word)))
            sign = -1 if permutation_parity(word) else 1
            M[r * dim:(r + 1) * dim, c * dim:(c + 1) * dim] += sign * mats[k - 1]
    return M


def contraction_matrix(mats, n, p):
    dim = mats[0].shape[0]
    src, dst = list(combinations(range(1, n + 1), p)), list(combinations(range(1, n + 1), p - 1))
    M = np.zeros((len(dst) * dim, len(src) * dim), dtype=np.int64)
    for c, i in enumerate(src):
        for pos, k in enumerate(i):
            r = dst.index(i[:pos] + i[pos + 1:])
            M[r * dim:(r + 1) * dim, c * dim:(c + 1) * dim] += (-1) ** pos * mats[k - 1]
    return M


def flatten(m: KoszulElement, dim):
    return np.concatenate(
        [m.components.get(i, np.zeros(dim, dtype=np.int64)) for i in multiindices(m.n, m.degree)]
    )


def test_multiindex_ops():
    assert multiindex_ops(2, (1, 3)) == ((1, 2, 3), 1, None)
    assert multiindex_ops(3, (1, 3)) == (None, 1, (1,))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_differentials_match_exterior_model(n):
    rng = random.Random(n)
    dim = 2
    mats = random_mats(rng, n, dim)
    fam = matrix_family(mats)
    for p in range(n + 1):
        m = random_element(rng, n, p, dim)
        if p < n:
            assert np.array_equal(flatten(dK(fam, m), dim), wedge_matrix(mats, n, p) @ flatten(m, dim))
        if p > 0:
            assert np.array_equal(flatten(delK(fam, m), dim), contraction_matrix(mats, n, p) @ flatten(m, dim))


def test_boundary_degrees_give_zero():
    fam = matrix_family([np.eye(1, dtype=np.int64)])
    top = KoszulElement(1, 1, {(1,): np.array([3])})
    bottom = KoszulElement(1, 0, {(): np.array([3])})
    assert dK(fam, top).is_zero() and dK(fam, top).degree == 2
    assert delK(fam, bottom).is_zero()


def test_commutator_correction_by_hand_n2():
    # expanding delK dK + dK delK on m1 e1 + m2 e2 directly
    rng = random.Random(8)
    psi_m, phi_m = random_mats(rng, 2, 3), random_mats(rng, 2, 3)
    psi, phi = matrix_family(psi_m), matrix_family(phi_m)
    m1, m2 = np.array([1, -2, 3]), np.array([0, 4, -1])
    m = KoszulElement(2, 1, {(1,): m1, (2,): m2})

    def br(a, b):
        return a @ b - b @ a

    bracket = delta_bracket(psi, phi, m)
    assert np.array_equal(bracket.components[(1,)], -br(psi_m[1], phi_m[0]) @ m2)
    assert np.array_equal(bracket.components[(2,)], -br(psi_m[0], phi_m[1]) @ m1)
    dot = delta_dot(psi, phi, m)
    assert np.array_equal(dot.components[(1,)], phi_m[0] @ psi_m[0] @ m1 + psi_m[1] @ phi_m[1] @ m1)
    assert homotopy_defect(psi, phi, m).is_zero()


def test_commuting_case_reduces_to_sum_of_products():
    rng = random.Random(4)
    for n in (1, 2, 3):
        psi_m, phi_m = random_mats(rng, n, 3, True), random_mats(rng, n, 3, True)
        total = sum(a @ b for a, b in zip(psi_m, phi_m))
        psi, phi = matrix_family(psi_m), matrix_family(phi_m)
        for p in range(n + 1):
            m = random_element(rng, n, p, 3)
            lhs = delK(psi, dK(phi, m)) + dK(phi, delK(psi, m))
            assert same(lhs, m.map(lambda v, total=total: total @ v))
            assert delta_bracket(psi, phi, m).is_zero()


def test_contraction_section_inverts_differential():
    # diagonal families with sum psi_k phi_k = 12 * identity
    phi_m = [np.diag([2, 1]), np.diag([1, 2]), np.diag([3, 3])]
    psi_m = [np.diag([3, 4]), np.diag([3, 1]), np.diag([1, 2])]
    phi, psi = matrix_family(phi_m), matrix_family(psi_m)

    def inverse(m):
        return m.map(lambda v: v // 12)

    rng = random.Random(9)
    for p in (1, 2):
        s_p = contraction_section(psi, phi, p, inverse)
        s_next = contraction_section(psi, phi, p + 1, inverse, variant="post")
        m = random_element(rng, 3, p, 2).map(lambda v: 12 * v)
        assert same(dK(phi, s_p(m)) + s_next(dK(phi, m)), m)
    with pytest.raises(ValueError):
        contraction_section(psi, phi, 1, inverse, variant="sideways")


def test_bad_multiindex_rejected():
    with pytest.raises(ValueError):
        KoszulElement(2, 1, {(3,): 1})
    with pytest.raises(ValueError):
        KoszulElement(2, 2, {(2, 1): 1})


def test_commutes_on():
    fam = matrix_family([np.diag([1, 2]), np.diag([3, 1])])
    assert fam.commutes_on([np.array([1, 1])])
    assert not matrix_family([np.array([[0, 1], [0, 0]]), np.array([[0, 0], [1, 0]])]).commutes_on(
        [np.array([1, 1])]
    )


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.integers(0, 10**6))
def test_differentials_square_to_zero_for_commuting(n, dim, seed):
    rng = random.Random(seed)
    fam = matrix_family(random_mats(rng, n, dim, commuting=True))
    for p in range(n + 1):
        m = random_element(rng, n, p, dim)
        assert dK(fam, dK(fam, m)).is_zero()
        assert delK(fam, delK(fam, m)).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.integers(0, 10**6), st.booleans())
def test_homotopy_identity(n, dim, seed, commuting):
    rng = random.Random(seed)
    psi = matrix_family(random_mats(rng, n, dim, commuting))
    phi = matrix_family(random_mats(rng, n, dim, commuting))
    for p in range(n + 1):
        assert homotopy_defect(psi, phi, random_element(rng, n, p, dim)).is_zero()
