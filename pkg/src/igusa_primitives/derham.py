"""The trivialized de Rham complex with coefficients in an induced module.

A p-form has one component per increasing p-tuple j in 1..d_g (the label
of omega_j); each component is an ``InducedElement`` whose coefficients are
``QSeries``.  The connection is the Koszul differential of the commuting
family

    nabla_i = theta_i (x) 1 + 1 (x) d_i,

with theta_i acting on the q-expansion coefficients and d_i the opposite
unipotent action on W (x) k[Y].  ``theta_part`` and ``delta_part`` are the
Koszul differentials of the two halves; the first preserves Y-degree, the
second raises it by one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import PadicContext, format_fraction, parse_fraction
from .errors import (
    ContextMismatch,
    NonVanishingConstant,
    NotClosed,
    NotDepleted,
    NoTermination,
    NotHomogeneous,
    NotInSubmodule,
)
from .induced import (
    InducedElement,
    LambdaBasis,
    derivation,
    frobenius_element,
    grade,
    membership,
    q_group_action,
)
from .koszul import KoszulElement, OperatorFamily, delK, dK
from .qseries import (
    QSeries,
    ThetaPolynomial,
    deplete,
    frobenius,
    is_depleted,
    theta,
    theta_poly,
    theta_poly_inverse,
)
from .rep import Representation, rep_from_json


@dataclass
class DeRhamForm:
    ctx: PadicContext
    rep: Representation
    degree: int
    truncation: Fraction
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        self.truncation = Fraction(self.truncation)
        n = self.ctx.d_g
        if not 0 <= self.degree <= n:
            raise ValueError(f"form degree {self.degree} outside 0..{n}")
        if self.rep.g != self.ctx.g:
            raise ContextMismatch("representation and context disagree on the genus")
        clean = {}
        for idx, v in self.components.items():
            idx = tuple(idx)
            if len(idx) != self.degree or list(idx) != sorted(set(idx)) or (idx and not 1 <= idx[0] <= idx[-1] <= n):
                raise ValueError(f"bad multi-index {idx}")
            if v.rep != self.rep:
                raise ContextMismatch("component lives in a different representation")
            if v:
                clean[idx] = v
        self.components = clean

    @property
    def n(self) -> int:
        return self.ctx.d_g

    def _like(self, components, degree=None) -> DeRhamForm:
        return DeRhamForm(
            self.ctx, self.rep, self.degree if degree is None else degree, self.truncation, components
        )

    def zero_like(self, degree=None) -> DeRhamForm:
        return self._like({}, degree)

    def __add__(self, other: DeRhamForm) -> DeRhamForm:
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.components)
        for i, v in other.components.items():
            out[i] = v if i not in out else out[i] + v
        return self._like(out)

    def __neg__(self) -> DeRhamForm:
        return self._like({i: -v for i, v in self.components.items()})

    def __sub__(self, other: DeRhamForm) -> DeRhamForm:
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other):
        if not isinstance(other, DeRhamForm):
            return NotImplemented
        return self.degree == other.degree and self.rep == other.rep and (self - other).is_zero()

    __hash__ = None

    def map_values(self, fn) -> DeRhamForm:
        return self._like({i: fn(v) for i, v in self.components.items()})

    def map_series(self, fn) -> DeRhamForm:
        return self.map_values(lambda v: v.map_coefficients(fn))

    def y_degrees(self) -> set[int]:
        out = set()
        for v in self.components.values():
            out |= v.degrees()
        return out

    def graded(self, r: int) -> DeRhamForm:
        return self.map_values(lambda v: grade(v, r))

    def graded_pieces(self) -> dict[int, DeRhamForm]:
        return {r: self.graded(r) for r in sorted(self.y_degrees())}

    def restrict_trace(self, bound) -> DeRhamForm:
        return self.map_series(lambda s: s.restrict_trace(bound))

    def max_trace(self) -> Fraction:
        return max(
            (s.max_trace() for v in self.components.values() for s in v.terms.values()),
            default=Fraction(0),
        )

    def _koszul(self) -> KoszulElement:
        return KoszulElement(self.n, self.degree, dict(self.components))

    def _from_koszul(self, k: KoszulElement) -> DeRhamForm:
        return self._like(k.components, k.degree)

    def to_json(self) -> dict:
        zero = QSeries.zero(self.ctx, self.truncation).to_json()
        return {
            "g": self.ctx.g,
            "degree": self.degree,
            "truncation": format_fraction(self.truncation),
            "rep": self.rep.to_json(),
            "components": [
                {
                    "multiindex": list(i),
                    "value": self.components[i].to_json(lambda s: s.to_json(), zero=_JsonZero(zero)),
                }
                for i in sorted(self.components)
            ],
        }

    @classmethod
    def from_json(cls, data: dict, ctx: PadicContext, truncation=None) -> DeRhamForm:
        if "g" in data and data["g"] != ctx.g:
            raise ContextMismatch(f"form has genus {data['g']}, context has {ctx.g}")
        rep = Representation(rep_from_json(data["rep"]), ctx.g)
        T = parse_fraction(data.get("truncation", truncation if truncation is not None else 0))
        comps = {}
        for c in data["components"]:
            value = InducedElement.from_json(c["value"], ctx.g, lambda s: QSeries.from_json(s, ctx))
            comps[tuple(c["multiindex"])] = value
        return cls(ctx, rep, int(data["degree"]), T, comps)

    def __repr__(self):
        if not self.components:
            return f"DeRhamForm(degree={self.degree}, 0)"
        body = "; ".join(f"{i}: {v!r}" for i, v in sorted(self.components.items()))
        return f"DeRhamForm(degree={self.degree}, {body})"


class _JsonZero:
    """Placeholder zero coefficient whose JSON is a fixed empty series."""

    def __init__(self, data):
        self.data = data

    def to_json(self):
        return self.data


# operator families on component values


def theta_value(i: int, v: InducedElement) -> InducedElement:
    return v.map_coefficients(lambda s: theta(i, s))


def delta_value(i: int, v: InducedElement) -> InducedElement:
    return derivation(i, v)


def nabla_value(i: int, v: InducedElement) -> InducedElement:
    return theta_value(i, v) + delta_value(i, v)


def _family(op, n: int) -> OperatorFamily:
    return OperatorFamily([lambda v, i=i: op(i, v) for i in range(1, n + 1)])


def theta_family(n: int) -> OperatorFamily:
    return _family(theta_value, n)


def delta_family(n: int) -> OperatorFamily:
    return _family(delta_value, n)


def nabla_family(n: int) -> OperatorFamily:
    return _family(nabla_value, n)


def nabla(F: DeRhamForm) -> DeRhamForm:
    if F.degree >= F.n:
        raise ValueError(f"nabla is zero on top-degree forms (degree {F.n})")
    return F._from_koszul(dK(nabla_family(F.n), F._koszul()))


def nabla_component(i: int, F: DeRhamForm) -> DeRhamForm:
    """nabla_i applied to every component, keeping the form degree."""
    return F.map_values(lambda v: nabla_value(i, v))


def _homogeneous_degree(F: DeRhamForm, expected):
    degs = F.y_degrees()
    if len(degs) > 1:
        raise NotHomogeneous(f"form has Y-degrees {sorted(degs)}")
    actual = next(iter(degs)) if degs else expected
    if expected is not None and actual != expected:
        raise NotHomogeneous(f"form has Y-degree {actual}, expected {expected}")
    return actual


def theta_total(F: DeRhamForm) -> DeRhamForm:
    return F._from_koszul(dK(theta_family(F.n), F._koszul()))


def delta_total(F: DeRhamForm) -> DeRhamForm:
    return F._from_koszul(dK(delta_family(F.n), F._koszul()))


def theta_part(F: DeRhamForm, grading: int | None = None) -> DeRhamForm:
    """The Y-degree preserving half of nabla on a homogeneous form."""
    _homogeneous_degree(F, grading)
    return theta_total(F)


def delta_part(F: DeRhamForm, grading: int | None = None) -> DeRhamForm:
    """The Y-degree raising half of nabla on a homogeneous form."""
    _homogeneous_degree(F, grading)
    return delta_total(F)


def deplete_form(P: ThetaPolynomial, F: DeRhamForm) -> DeRhamForm:
    return F.map_series(lambda s: deplete(P, s))


def is_depleted_form(P: ThetaPolynomial, F: DeRhamForm) -> bool:
    return all(is_depleted(P, s) for v in F.components.values() for s in v.terms.values())


def is_closed(F: DeRhamForm) -> bool:
    if F.degree == F.n:
        return True
    return nabla(F).is_zero()


def decompose_P(P: ThetaPolynomial) -> list[ThetaPolynomial]:
    """Split P = sum_k T_k P_k, sending each monomial to its smallest variable."""
    if P.constant_term():
        raise NonVanishingConstant(f"P(0) = {P.constant_term()} is not zero")
    parts: list[dict] = [{} for _ in range(P.d)]
    for exps, c in P.terms.items():
        k = next(n for n, e in enumerate(exps) if e)
        lowered = list(exps)
        lowered[k] -= 1
        parts[k][tuple(lowered)] = c
    return [ThetaPolynomial(P.d, t) for t in parts]


def integration_family(P: ThetaPolynomial, n: int) -> OperatorFamily:
    """psi_k = P_k(theta) theta_P^{-1} on component values."""
    stars = decompose_P(P)

    def op(k, v):
        return v.map_coefficients(lambda s: theta_poly(stars[k - 1], theta_poly_inverse(P, s)))

    return _family(op, n)


def theta_inverse(P: ThetaPolynomial, F: DeRhamForm) -> DeRhamForm:
    """Integration section of Theta on depleted forms, lowering form degree by one."""
    if F.degree < 1:
        raise ValueError("theta_inverse needs a form of degree at least 1")
    return F._from_koszul(delK(integration_family(P, F.n), F._koszul()))


@dataclass
class SolverReport:
    primitive: DeRhamForm
    iterations: int
    residual_ok: bool
    grades: list

    def to_json(self) -> dict:
        return {
            "degree": self.primitive.degree,
            "iterations": self.iterations,
            "residual_ok": self.residual_ok,
            "primitive": self.primitive.to_json(),
            "grades": [F.to_json() for F in self.grades],
        }


def residual_bound(f: DeRhamForm) -> Fraction:
    """Trace bound below which a residual comparison is free of boundary effects."""
    return f.truncation - f.ctx.p * f.max_trace()


def solve_primitive(
    P: ThetaPolynomial,
    f: DeRhamForm,
    max_grade: int | None = None,
    dimension_bound: int | None = None,
    check: bool = True,
) -> SolverReport:
    """Find F with nabla F = f through F_i = Theta^{-1}(f_i - Delta F_{i-1}).

    Stops at the first r with Delta F_r = 0 and no component of f above
    Y-degree r.  Raises ``NoTermination`` once ``max_grade`` is passed.
    """
    if not 1 <= f.degree <= f.n:
        raise ValueError(f"form degree must be in 1..{f.n}")
    if check and not is_closed(f):
        raise NotClosed("the input form is not closed")
    if check and not is_depleted_form(P, f):
        raise NotDepleted("the input form is not P-depleted")
    if max_grade is None:
        max_grade = dimension_bound if dimension_bound is not None else 64
    pieces = f.graded_pieces()
    top = max(pieces, default=-1)
    carry = f.zero_like()
    grades = []
    for i in range(max_grade + 1):
        target = pieces.get(i, f.zero_like()) - carry
        F_i = theta_inverse(P, target)
        grades.append(F_i)
        carry = delta_part(F_i, i)
        if carry.is_zero() and i >= top:
            primitive = f.zero_like(f.degree - 1)
            for piece in grades:
                primitive = primitive + piece
            residual_ok = nabla(primitive) == f
            return SolverReport(primitive, i, residual_ok, grades)
    raise NoTermination(f"no termination within {max_grade} grades")


def coefficient_slices(v: InducedElement) -> dict:
    """Split a q-series valued element into rational elements, one per q-exponent."""
    out: dict = {}
    for key, s in v.terms.items():
        for qkey, c in s.terms.items():
            exponent = tuple(Fraction(e, s.D) for e in qkey)
            out.setdefault(exponent, {})[key] = c
    return {e: InducedElement(v.rep, t) for e, t in sorted(out.items())}


def form_in_submodule(F: DeRhamForm, basis: LambdaBasis) -> bool:
    return all(
        membership(piece, basis).member
        for v in F.components.values()
        for piece in coefficient_slices(v).values()
    )


def restrict_to_L(basis: LambdaBasis, f: DeRhamForm, report: SolverReport) -> bool:
    """True iff every grade F_i of the solution lies in gr_i of the submodule."""
    if not form_in_submodule(f, basis):
        raise NotInSubmodule("the input form is not valued in the submodule")
    for i, F_i in enumerate(report.grades):
        if F_i.y_degrees() - {i}:
            return False
        if not form_in_submodule(F_i, basis):
            return False
    return True


def frobenius_form(F: DeRhamForm) -> DeRhamForm:
    """q^mu -> q^{p mu} on scalars, m0 on values, and a factor p per omega label."""
    a, b, nu = frobenius_element(F.ctx.p, F.ctx.g)
    twist = Fraction(F.ctx.p) ** F.degree

    def value(v):
        return q_group_action(a, b, nu, v.map_coefficients(frobenius)).scale(twist)

    return F.map_values(value)


def zero_form(ctx: PadicContext, rep: Representation, degree: int, truncation) -> DeRhamForm:
    return DeRhamForm(ctx, rep, degree, truncation, {})

