"""One-variable q-expansions and the weight-k integration recursion.

This is the elliptic case written directly in terms of a_n and n, kept
independent of the matrix-indexed engine so the two can be compared.  A
one-variable exponent n corresponds to the 1 x 1 matrix index (2n), whose
diagonal theta eigenvalue is n.

The prime here is a plain integer: nothing in this module needs p to be
odd, so the classical p = 2 examples work as well.
"""

from __future__ import annotations

from fractions import Fraction

from .arith import PadicContext, as_fraction, format_fraction, is_prime, parse_fraction
from .errors import DomainError, NotDepleted
from .qseries import QSeries


def _exponent_valuation(n: Fraction, p: int) -> int:
    """v_p of a non-zero rational exponent."""
    v = 0
    num, den = n.numerator, n.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


class QSeries1:
    __slots__ = ("N", "terms", "truncation")

    def __init__(self, terms=None, truncation=10, N: int = 1):
        self.N = N
        self.truncation = as_fraction(truncation)
        clean = {}
        for n, c in (terms or {}).items():
            n, c = as_fraction(n), as_fraction(c)
            if (n * N).denominator != 1:
                raise ValueError(f"exponent {n} does not have denominator dividing N={N}")
            if c and n <= self.truncation:
                clean[n] = clean.get(n, Fraction(0)) + c
        self.terms = {n: c for n, c in clean.items() if c}

    def _like(self, terms) -> QSeries1:
        return QSeries1(terms, self.truncation, self.N)

    def __add__(self, other: QSeries1) -> QSeries1:
        out = dict(self.terms)
        for n, c in other.terms.items():
            out[n] = out.get(n, 0) + c
        return QSeries1(out, min(self.truncation, other.truncation), self.N)

    def __neg__(self) -> QSeries1:
        return self._like({n: -c for n, c in self.terms.items()})

    def __sub__(self, other: QSeries1) -> QSeries1:
        return self + (-other)

    def scale(self, s) -> QSeries1:
        return self._like({n: s * c for n, c in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, QSeries1):
            return NotImplemented
        return self.terms == other.terms and self.truncation == other.truncation

    __hash__ = None

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "truncation": format_fraction(self.truncation),
            "terms": [
                {"n": format_fraction(n), "coeff": format_fraction(c)} for n, c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> QSeries1:
        terms = {}
        for t in data["terms"]:
            n = parse_fraction(t["n"])
            terms[n] = terms.get(n, 0) + parse_fraction(t["coeff"])
        return cls(terms, parse_fraction(data.get("truncation", max(terms, default=0))), int(data.get("N", 1)))

    def __repr__(self):
        body = " + ".join(f"{c}*q^{n}" for n, c in sorted(self.terms.items())) or "0"
        return f"QSeries1({body}; T={self.truncation})"


def _check_prime(p: int):
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")


def serre_theta(f: QSeries1) -> QSeries1:
    return f._like({n: n * c for n, c in f.terms.items()})


def is_p_depleted(f: QSeries1, p: int) -> bool:
    _check_prime(p)
    return all(n != 0 and _exponent_valuation(n, p) == 0 for n in f.terms)


def p_deplete(f: QSeries1, p: int) -> QSeries1:
    _check_prime(p)
    return f._like({n: c for n, c in f.terms.items() if n != 0 and _exponent_valuation(n, p) == 0})


def theta_inverse_1(f: QSeries1, p: int) -> QSeries1:
    if not is_p_depleted(f, p):
        raise NotDepleted(f"series has exponents divisible by {p}")
    return f._like({n: c / n for n, c in f.terms.items()})


def solve_weight_k(k: int, f: QSeries1, p: int) -> list[QSeries1]:
    """Components F_0..F_{k-2} with theta F_0 = f and theta F_i = -(k-1-i) F_{i-1}."""
    if k < 2:
        raise DomainError("weight must be at least 2")
    components = [theta_inverse_1(f, p)]
    for i in range(1, k - 1):
        components.append(theta_inverse_1(components[-1], p).scale(-(k - 1 - i)))
    return components


def to_qseries(f: QSeries1, ctx: PadicContext) -> QSeries:
    """Embed in the genus-1 matrix-indexed series: q^n -> q^[[2n]]."""
    if ctx.g != 1:
        raise DomainError("one-variable series embed only at genus 1")
    D = f.N
    return QSeries(ctx, {(int(2 * n * D),): c for n, c in f.terms.items()}, 2 * f.truncation, D)


def from_qseries(s: QSeries, N: int | None = None) -> QSeries1:
    if s.ctx.g != 1:
        raise DomainError("only genus-1 series have a one-variable form")
    N = N or s.D
    return QSeries1({Fraction(k[0], 2 * s.D): c for k, c in s.terms.items()}, s.truncation / 2, N)
