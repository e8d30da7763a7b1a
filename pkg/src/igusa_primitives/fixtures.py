"""Seeded random inputs shared by the self-test command and the test suite."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement

from .arith import PadicContext
from .derham import DeRhamForm
from .induced import InducedElement
from .koszul import multiindices
from .qseries import QSeries, ThetaPolynomial, is_depleted
from .rep import DetPower, Representation, Std, Sym, Tensor, Trivial

DEFAULT_SEED = 20240517


def parse_simple_poly(text: str, d: int) -> ThetaPolynomial:
    """Sums of products of T<k>; enough for fixtures without the CLI parser."""
    terms = {}
    for mono in text.replace(" ", "").split("+"):
        exps = [0] * d
        for factor in mono.split("*"):
            exps[int(factor[1:]) - 1] += 1
        terms[tuple(exps)] = terms.get(tuple(exps), 0) + 1
    return ThetaPolynomial(d, terms)


STANDARD_POLYS = ("T1", "T1*T2+T3", "T1+T2+T3")


def named_reps(g: int) -> dict[str, Representation]:
    return {
        "trivial": Representation(Trivial(), g),
        "std": Representation(Std(), g),
        "sym2_det1": Representation(Tensor(Sym(2, Std()), DetPower(1)), g),
    }


def random_fraction(rng: random.Random, size: int = 5) -> Fraction:
    num = rng.randint(-size, size) or 1
    return Fraction(num, rng.choice((1, 1, 2, 3)))


def random_index_key(rng: random.Random, g: int, max_trace: int) -> tuple:
    diag = [0] * g
    budget = rng.randint(0, max_trace)
    for _ in range(budget):
        diag[rng.randrange(g)] += 1
    off = [rng.randint(-2, 2) for _ in range(g * (g - 1) // 2)]
    return tuple(diag + off)


def random_series(
    rng: random.Random,
    ctx: PadicContext,
    truncation,
    n_terms: int = 3,
    depleted_for: ThetaPolynomial | None = None,
) -> QSeries:
    terms = {}
    attempts = 0
    while len(terms) < n_terms and attempts < 50 * n_terms:
        attempts += 1
        key = random_index_key(rng, ctx.g, int(truncation))
        if depleted_for is not None and not is_depleted(
            depleted_for, QSeries(ctx, {key: Fraction(1)}, truncation)
        ):
            continue
        terms[key] = random_fraction(rng)
    return QSeries(ctx, terms, truncation)


def ymonomials(d_g: int, degree: int) -> list[tuple]:
    out = []
    for combo in combinations_with_replacement(range(d_g), degree):
        m = [0] * d_g
        for n in combo:
            m[n] += 1
        out.append(tuple(m))
    return out


def random_value(
    rng: random.Random,
    ctx: PadicContext,
    rep: Representation,
    y_degrees,
    truncation,
    n_terms: int = 3,
    depleted_for: ThetaPolynomial | None = None,
) -> InducedElement:
    terms = {}
    for _ in range(n_terms):
        r = rng.choice(list(y_degrees))
        mono = rng.choice(ymonomials(ctx.d_g, r))
        w = rng.randrange(rep.rank)
        s = random_series(rng, ctx, truncation, rng.randint(1, 2), depleted_for)
        key = (mono, w)
        terms[key] = s if key not in terms else terms[key] + s
    return InducedElement(rep, terms)


def random_form(
    rng: random.Random,
    ctx: PadicContext,
    rep: Representation,
    degree: int,
    y_degrees=(0, 1, 2),
    truncation=6,
    n_terms: int = 2,
    depleted_for: ThetaPolynomial | None = None,
    density: float = 0.7,
) -> DeRhamForm:
    comps = {}
    for idx in multiindices(ctx.d_g, degree):
        if rng.random() < density:
            comps[idx] = random_value(rng, ctx, rep, y_degrees, truncation, n_terms, depleted_for)
    return DeRhamForm(ctx, rep, degree, truncation, comps)


def random_submodule_form(
    rng: random.Random,
    ctx: PadicContext,
    basis,
    degree: int,
    truncation=6,
    depleted_for: ThetaPolynomial | None = None,
    n_terms: int = 2,
) -> DeRhamForm:
    """Random form whose values are q-series combinations of submodule basis vectors."""
    elements = [b for level in basis.degrees for b in level]
    comps = {}
    for idx in multiindices(ctx.d_g, degree):
        value = None
        for _ in range(n_terms):
            b = rng.choice(elements)
            s = random_series(rng, ctx, truncation, rng.randint(1, 2), depleted_for)
            term = b.map_coefficients(lambda c, s=s: c * s)
            value = term if value is None else value + term
        if value:
            comps[idx] = value
    return DeRhamForm(ctx, basis.rep, degree, truncation, comps)


