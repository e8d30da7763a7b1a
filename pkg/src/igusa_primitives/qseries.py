"""Sparse q-expansions indexed by symmetric rational g x g matrices.

An exponent mu is stored as a tuple of d_g = g(g+1)/2 integers in the fixed
order (1,1), ..., (g,g), then (k,l) with k < l lexicographically; the actual
rational entries are those integers divided by the series-wide denominator D.
A series keeps only exponents whose trace is at most its truncation bound T.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cache
from itertools import combinations

from .arith import PadicContext, as_fraction, format_fraction, parse_fraction, valuation
from .errors import ContextMismatch, InvalidContext, NonIntegralEigenvalue, NotDepleted


@cache
def index_pairs(g: int) -> tuple[tuple[int, int], ...]:
    """0-based (row, col) pairs in the fixed 1..d_g order."""
    return tuple((i, i) for i in range(g)) + tuple(combinations(range(g), 2))


@cache
def pair_position(g: int) -> dict[tuple[int, int], int]:
    pos = {}
    for n, (i, j) in enumerate(index_pairs(g)):
        pos[(i, j)] = n
        pos[(j, i)] = n
    return pos


def key_from_matrix(matrix, D: int) -> tuple[int, ...]:
    g = len(matrix)
    out = []
    for i, j in index_pairs(g):
        if as_fraction(matrix[i][j]) != as_fraction(matrix[j][i]):
            raise ValueError("exponent matrix must be symmetric")
        scaled = as_fraction(matrix[i][j]) * D
        if scaled.denominator != 1:
            raise ValueError(f"entry {matrix[i][j]} is not integral over D={D}")
        out.append(int(scaled))
    return tuple(out)


def matrix_from_key(key, g: int) -> list[list[int]]:
    m = [[0] * g for _ in range(g)]
    for (i, j), v in zip(index_pairs(g), key):
        m[i][j] = v
        m[j][i] = v
    return m


def matrix_denominator(matrix) -> int:
    return math.lcm(1, *(as_fraction(x).denominator for row in matrix for x in row))


def _key_eigenvalues(key, D: int, g: int) -> tuple[Fraction, ...]:
    return tuple(
        Fraction(v, 2 * D) if n < g else Fraction(v, D) for n, v in enumerate(key)
    )


def theta_eigenvalue(i: int, mu) -> Fraction:
    """Eigenvalue of theta_i on q^mu: half the diagonal entry, or the off-diagonal entry."""
    g = len(mu)
    r, c = index_pairs(g)[i - 1]
    entry = as_fraction(mu[r][c])
    return entry / 2 if r == c else entry


class ThetaPolynomial:
    """Polynomial in T_1..T_d, stored as {exponent tuple: Fraction}."""

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms=None):
        self.d = d
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != d:
                raise ValueError(f"exponent vector {exps} does not have length {d}")
            c = as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def variable(cls, k: int, d: int) -> ThetaPolynomial:
        exps = [0] * d
        exps[k - 1] = 1
        return cls(d, {tuple(exps): 1})

    @classmethod
    def constant(cls, c, d: int) -> ThetaPolynomial:
        return cls(d, {(0,) * d: c})

    def evaluate(self, values) -> Fraction:
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for v, e in zip(values, exps):
                if e:
                    term *= v ** e
            total += term
        return total

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.d, Fraction(0))

    def __add__(self, other: ThetaPolynomial) -> ThetaPolynomial:
        merged = dict(self.terms)
        for e, c in other.terms.items():
            merged[e] = merged.get(e, Fraction(0)) + c
        return ThetaPolynomial(self.d, merged)

    def __mul__(self, other: ThetaPolynomial) -> ThetaPolynomial:
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return ThetaPolynomial(self.d, out)

    def __eq__(self, other):
        return isinstance(other, ThetaPolynomial) and self.d == other.d and self.terms == other.terms

    def __hash__(self):
        return hash((self.d, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                f"T{k + 1}" if e == 1 else f"T{k + 1}^{e}" for k, e in enumerate(exps) if e
            )
            if not mono:
                parts.append(format_fraction(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{format_fraction(c)}*{mono}")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self):
        return [{"exponents": list(e), "coeff": format_fraction(c)} for e, c in sorted(self.terms.items())]


class QSeries:
    """Truncated q-expansion with exact rational coefficients."""

    __slots__ = ("D", "ctx", "terms", "truncation")

    def __init__(self, ctx: PadicContext, terms=None, truncation=0, D: int = 1):
        if D < 1 or math.gcd(D, ctx.p) != 1:
            raise InvalidContext(f"denominator D={D} must be positive and prime to p={ctx.p}")
        self.ctx = ctx
        self.D = D
        self.truncation = as_fraction(truncation)
        bound = self.truncation * D
        g = ctx.g
        self.terms = {}
        for key, c in (terms or {}).items():
            if c and sum(key[:g]) <= bound:
                self.terms[key] = c if isinstance(c, Fraction) else Fraction(c)

    # construction helpers

    @classmethod
    def zero(cls, ctx, truncation, D=1) -> QSeries:
        return cls(ctx, {}, truncation, D)

    @classmethod
    def constant(cls, ctx, c, truncation, D=1) -> QSeries:
        return cls(ctx, {(0,) * ctx.d_g: as_fraction(c)}, truncation, D)

    @classmethod
    def monomial(cls, ctx, matrix, coeff=1, truncation=None, D=None) -> QSeries:
        if D is None:
            D = matrix_denominator(matrix)
        key = key_from_matrix(matrix, D)
        if truncation is None:
            truncation = Fraction(sum(key[: ctx.g]), D)
        return cls(ctx, {key: as_fraction(coeff)}, truncation, D)

    def _like(self, terms, D=None, truncation=None) -> QSeries:
        return QSeries(
            self.ctx,
            terms,
            self.truncation if truncation is None else truncation,
            self.D if D is None else D,
        )

    def with_denominator(self, D: int) -> QSeries:
        if D == self.D:
            return self
        if D % self.D:
            raise ValueError(f"{D} is not a multiple of {self.D}")
        s = D // self.D
        return self._like({tuple(v * s for v in k): c for k, c in self.terms.items()}, D=D)

    def _aligned(self, other: QSeries):
        if self.ctx != other.ctx:
            raise ContextMismatch("series live in different contexts")
        D = math.lcm(self.D, other.D)
        return self.with_denominator(D), other.with_denominator(D)

    # ring structure

    def __add__(self, other):
        if not isinstance(other, QSeries):
            if other == 0:
                return self
            return NotImplemented
        a, b = self._aligned(other)
        out = dict(a.terms)
        for k, c in b.terms.items():
            s = out.get(k)
            out[k] = c if s is None else s + c
        return a._like(out, truncation=min(a.truncation, b.truncation))

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self._like({})
            return self._like({k: c * other for k, c in self.terms.items()})
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self._aligned(other)
        T = min(a.truncation, b.truncation)
        bound = T * a.D
        g = self.ctx.g
        out: dict = {}
        for k1, c1 in a.terms.items():
            t1 = sum(k1[:g])
            for k2, c2 in b.terms.items():
                if t1 + sum(k2[:g]) > bound:
                    continue
                k = tuple(x + y for x, y in zip(k1, k2))
                out[k] = out.get(k, 0) + c1 * c2
        return a._like(out, truncation=T)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return other == 0 and not self.terms
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.ctx != other.ctx or self.truncation != other.truncation:
            return False
        a, b = self._aligned(other)
        return a.terms == b.terms

    __hash__ = None

    # inspection

    def eigenvalues(self, key) -> tuple[Fraction, ...]:
        return _key_eigenvalues(key, self.D, self.ctx.g)

    def trace(self, key) -> Fraction:
        return Fraction(sum(key[: self.ctx.g]), self.D)

    def max_trace(self) -> Fraction:
        return max((self.trace(k) for k in self.terms), default=Fraction(0))

    def coefficient(self, matrix) -> Fraction:
        D = math.lcm(self.D, matrix_denominator(matrix))
        key = key_from_matrix(matrix, D)
        return self.with_denominator(D).terms.get(key, Fraction(0))

    def map_terms(self, fn) -> QSeries:
        """Apply ``fn(key, coeff) -> new coeff`` to every term."""
        return self._like({k: fn(k, c) for k, c in self.terms.items()})

    def restrict_trace(self, bound) -> QSeries:
        bound = as_fraction(bound)
        return self._like({k: c for k, c in self.terms.items() if self.trace(k) <= bound})

    def even_support_violations(self) -> list:
        """Exponents that are not of the form N^{-1} beta with beta integral and even on the diagonal."""
        g, N = self.ctx.g, self.ctx.N
        bad = []
        for key in self.terms:
            scaled = [Fraction(v * N, self.D) for v in key]
            if any(x.denominator != 1 for x in scaled) or any(int(x) % 2 for x in scaled[:g]):
                bad.append(matrix_from_key(key, g))
        return bad

    def sorted_items(self):
        g = self.ctx.g

        def flat(key):
            return [v for row in matrix_from_key(key, g) for v in row]

        return sorted(self.terms.items(), key=lambda kc: flat(kc[0]))

    def to_json(self) -> dict:
        g = self.ctx.g
        return {
            "g": g,
            "D": self.D,
            "truncation": format_fraction(self.truncation),
            "terms": [
                {"index": matrix_from_key(k, g), "coeff": format_fraction(c)}
                for k, c in self.sorted_items()
            ],
        }

    @classmethod
    def from_json(cls, data: dict, ctx: PadicContext) -> QSeries:
        if data["g"] != ctx.g:
            raise ContextMismatch(f"series has genus {data['g']}, context has {ctx.g}")
        D = int(data["D"])
        terms = {}
        for t in data["terms"]:
            key = key_from_matrix(t["index"], 1)
            terms[key] = terms.get(key, 0) + parse_fraction(t["coeff"])
        return cls(ctx, terms, parse_fraction(data["truncation"]), D)

    def __repr__(self):
        if not self.terms:
            return "QSeries(0)"
        body = " + ".join(
            f"{format_fraction(c)}*q^{matrix_from_key(k, self.ctx.g)}" for k, c in self.sorted_items()
        )
        return f"QSeries({body}; D={self.D}, T={self.truncation})"


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def theta(i: int, f: QSeries) -> QSeries:
    g = f.ctx.g
    n = i - 1
    den = 2 * f.D if n < g else f.D
    return f.map_terms(lambda k, c: c * Fraction(k[n], den))


def _poly_value(P: ThetaPolynomial, f: QSeries, key) -> Fraction:
    return P.evaluate(f.eigenvalues(key))


def theta_poly(P: ThetaPolynomial, f: QSeries) -> QSeries:
    """P(theta_1, ..., theta_d) applied termwise through the eigenvalues."""
    return f.map_terms(lambda k, c: c * _poly_value(P, f, k))


def _unit_part(P: ThetaPolynomial, f: QSeries, key) -> bool:
    v = valuation(_poly_value(P, f, key), f.ctx)
    if v < 0:
        raise NonIntegralEigenvalue(f"P has negative valuation at exponent {matrix_from_key(key, f.ctx.g)}")
    return v == 0


def deplete(P: ThetaPolynomial, f: QSeries) -> QSeries:
    """Keep exactly the terms on which P(theta) acts by a p-adic unit."""
    return f._like({k: c for k, c in f.terms.items() if _unit_part(P, f, k)})


def is_depleted(P: ThetaPolynomial, f: QSeries) -> bool:
    return all(_unit_part(P, f, k) for k in f.terms)


def theta_poly_inverse(P: ThetaPolynomial, f: QSeries) -> QSeries:
    out = {}
    for k, c in f.terms.items():
        value = _poly_value(P, f, k)
        if valuation(value, f.ctx) != 0:
            raise NotDepleted(f"P(theta) is not a unit on exponent {matrix_from_key(k, f.ctx.g)}")
        out[k] = c / value
    return f._like(out)


def frobenius(f: QSeries) -> QSeries:
    """q^mu -> q^{p mu}; exponents pushed past the truncation bound are dropped."""
    p = f.ctx.p
    return f._like({tuple(p * v for v in k): c for k, c in f.terms.items()})
