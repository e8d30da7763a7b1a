"""In-process invariant checks behind the ``selftest`` and ``koszul-selftest`` commands.

Every check draws its inputs from ``random.Random(seed)`` with a fixed
default seed, so the report is byte-identical between runs.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .arith import PadicContext
from .derham import (
    DeRhamForm,
    deplete_form,
    frobenius_form,
    nabla,
    nabla_component,
    solve_primitive,
    theta_inverse,
    theta_total,
)
from .fixtures import (
    DEFAULT_SEED,
    STANDARD_POLYS,
    parse_simple_poly,
    random_form,
    random_series,
)
from .genus1 import QSeries1, from_qseries, p_deplete, solve_weight_k, to_qseries
from .induced import (
    InducedElement,
    derivation,
    frobenius_element,
    generate_L_lambda,
    monomial_element,
    q_group_action,
)
from .koszul import KoszulElement, OperatorFamily, homotopy_defect, multiindices
from .qseries import ThetaPolynomial, deplete, theta, theta_poly, theta_poly_inverse
from .rep import Representation, Std, Sym, Trivial, highest_weight_vector


def _matrix_op(m):
    def apply(v):
        return tuple(sum((m[r][c] * v[c] for c in range(len(v))), Fraction(0)) for r in range(len(m)))

    return apply


class _Vec(tuple):
    """Tuple with componentwise + and - so Koszul components can be rational vectors."""

    def __add__(self, other):
        return _Vec(a + b for a, b in zip(self, other))

    def __neg__(self):
        return _Vec(-a for a in self)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self):
        return not any(self)


def _vec_op(m):
    base = _matrix_op(m)
    return lambda v: _Vec(base(v))


def random_matrix_family(rng, n, dim, commuting):
    if commuting:
        diags = [[Fraction(rng.randint(-4, 4)) for _ in range(dim)] for _ in range(n)]
        return [[[d[r] if r == c else Fraction(0) for c in range(dim)] for r in range(dim)] for d in diags]
    return [[[Fraction(rng.randint(-3, 3)) for _ in range(dim)] for _ in range(dim)] for _ in range(n)]


def koszul_homotopy_cases(rng, n_commuting=50, n_general=20, dims=(1, 2, 3, 4)):
    """Yield (n, p, psi, phi, element) over random families."""
    for count, commuting in ((n_commuting, True), (n_general, False)):
        for _ in range(count):
            n = rng.choice((1, 2, 3))
            dim = rng.choice(dims)
            psi = OperatorFamily([_vec_op(m) for m in random_matrix_family(rng, n, dim, commuting)])
            phi = OperatorFamily([_vec_op(m) for m in random_matrix_family(rng, n, dim, commuting)])
            for p in range(n + 1):
                comps = {
                    i: _Vec(Fraction(rng.randint(-5, 5)) for _ in range(dim)) for i in multiindices(n, p)
                }
                yield n, p, psi, phi, KoszulElement(n, p, comps)


def check_koszul(seed=DEFAULT_SEED, n_commuting=10, n_general=5) -> bool:
    rng = random.Random(seed)
    return all(
        homotopy_defect(psi, phi, m).is_zero()
        for _, _, psi, phi, m in koszul_homotopy_cases(rng, n_commuting, n_general)
    )


def check_nabla_squared(seed) -> bool:
    rng = random.Random(seed)
    ctx = PadicContext(5, 20, 1, 2)
    rep = Representation(Std(), 2)
    for degree in (0, 1):
        F = random_form(rng, ctx, rep, degree)
        if not nabla(nabla(F)).is_zero() or not theta_total(theta_total(F)).is_zero():
            return False
    return True


def check_section(seed) -> bool:
    rng = random.Random(seed)
    ctx = PadicContext(5, 20, 1, 2)
    rep = Representation(Std(), 2)
    for text in STANDARD_POLYS:
        P = parse_simple_poly(text, 3)
        for degree in (1, 2, 3):
            G = random_form(rng, ctx, rep, degree - 1, depleted_for=P)
            f = theta_total(G)
            if theta_total(theta_inverse(P, f)) != f:
                return False
    return True


def check_depletion(seed) -> bool:
    rng = random.Random(seed)
    ctx = PadicContext(5, 20, 1, 2)
    P = parse_simple_poly("T1+T2+T3", 3)
    for _ in range(5):
        s = random_series(rng, ctx, 6, 4)
        e = deplete(P, s)
        if deplete(P, e) != e:
            return False
        if any(deplete(P, theta(i, s)) != theta(i, e) for i in (1, 2, 3)):
            return False
        if theta_poly(P, theta_poly_inverse(P, e)) != e:
            return False
    return True


def check_uminus_genus1() -> bool:
    triv = Representation(Trivial(), 1)
    if derivation(1, monomial_element(triv, (1,), 0)) != monomial_element(triv, (2,), 0, Fraction(-1)):
        return False
    for k in range(2, 11):
        rep = Representation(Sym(k - 2, Std()), 1)
        for i in range(k - 1):
            expected = monomial_element(rep, (i + 1,), 0, Fraction(k - 2 - i))
            if derivation(1, monomial_element(rep, (i,), 0)) != expected:
                return False
    return True


def check_genus1_oracle(seed) -> bool:
    rng = random.Random(seed)
    for p in (3, 5):
        ctx = PadicContext(p, 20, 1, 1)
        P = ThetaPolynomial.variable(1, 1)
        for k in (2, 3, 5):
            f = p_deplete(QSeries1({n: rng.randint(-5, 5) for n in range(1, 8)}, 8), p)
            if genus1_via_derham(ctx, P, k, f) != solve_weight_k(k, f, p):
                return False
    return True


def genus1_via_derham(ctx, P, k, f: QSeries1) -> list[QSeries1]:
    """Run the general solver on f e_1^{k-2} omega at genus 1 and read off F_0..F_{k-2}."""
    rep = Representation(Sym(k - 2, Std()), 1)
    series = to_qseries(f, ctx)
    form = DeRhamForm(ctx, rep, 1, series.truncation, {(1,): InducedElement(rep, {((0,), 0): series})})
    primitive = solve_primitive(P, form).primitive
    value = primitive.components.get(())
    out = []
    for i in range(k - 1):
        s = value.terms.get(((i,), 0)) if value is not None else None
        out.append(from_qseries(s, f.N) if s is not None else QSeries1({}, f.truncation, f.N))
    return out


def check_frobenius(seed) -> bool:
    rng = random.Random(seed)
    ctx = PadicContext(3, 20, 1, 2)
    rep = Representation(Std(), 2)
    for degree in (0, 1):
        F = random_form(rng, ctx, rep, degree, truncation=9)
        phiF = frobenius_form(F)
        for i in (1, 2, 3):
            lhs = nabla_component(i, phiF)
            rhs = frobenius_form(nabla_component(i, F))
            if lhs != rhs.map_values(lambda v: v.scale(3)):
                return False
    triv = Representation(Trivial(), 2)
    a, b, nu = frobenius_element(3, 2)
    for r in range(4):
        v = monomial_element(triv, (r, 0, 0), 0)
        if q_group_action(a, b, nu, v) != v.scale(Fraction(1, 3**r)):
            return False
    return True


def check_submodule_dimensions() -> bool:
    for k in range(2, 9):
        rep = Representation(Sym(k - 2, Std()), 1)
        if generate_L_lambda(rep, highest_weight_vector(rep)).dimension != k - 1:
            return False
    rep = Representation(Std(), 2)
    return generate_L_lambda(rep, highest_weight_vector(rep)).dimension == 4


def check_json_round_trip(seed) -> bool:
    rng = random.Random(seed)
    ctx = PadicContext(5, 20, 1, 2)
    F = random_form(rng, ctx, Representation(Sym(2, Std()), 2), 1)
    return DeRhamForm.from_json(F.to_json(), ctx) == F and deplete_form(
        parse_simple_poly("T1", 3), F
    ) == deplete_form(parse_simple_poly("T1", 3), DeRhamForm.from_json(F.to_json(), ctx))


def run_selftest(seed: int = DEFAULT_SEED) -> dict:
    checks = [
        ("koszul_homotopy", lambda: check_koszul(seed)),
        ("nabla_squared_zero", lambda: check_nabla_squared(seed)),
        ("theta_section", lambda: check_section(seed)),
        ("depletion_algebra", lambda: check_depletion(seed)),
        ("uminus_genus1_formulas", check_uminus_genus1),
        ("genus1_oracle", lambda: check_genus1_oracle(seed)),
        ("frobenius_commutation", lambda: check_frobenius(seed)),
        ("submodule_dimensions", check_submodule_dimensions),
        ("json_round_trip", lambda: check_json_round_trip(seed)),
    ]
    results = [{"name": name, "passed": bool(fn())} for name, fn in checks]
    return {"seed": seed, "checks": results, "passed": all(r["passed"] for r in results)}


def run_koszul_selftest(seed: int = DEFAULT_SEED) -> dict:
    rng = random.Random(seed)
    counts: dict = {}
    failures = 0
    for n, p, psi, phi, m in koszul_homotopy_cases(rng, 20, 10):
        ok = homotopy_defect(psi, phi, m).is_zero()
        key = f"n={n},p={p}"
        counts[key] = counts.get(key, 0) + 1
        failures += not ok
    return {"seed": seed, "cases": dict(sorted(counts.items())), "failures": failures, "passed": failures == 0}
