"""Representations of GL_g x G_m given by construction trees.

A tree is built from ``Std``, ``Dual``, ``Sym``, ``Wedge``, ``Tensor``,
``DetPower``, ``SimTwist`` and ``Trivial``.  ``Representation.matrix``
evaluates the tree on a pair (a, nu) whose entries live in any commutative
ring supporting ``+``, ``-`` and ``*`` with integers (``Fraction``,
``DualNumber``, sympy expressions, ...).  Inverses are only needed for ``Dual``
nodes and negative determinant powers.

The Lie algebra action is obtained by evaluating at a = 1 + eps X, nu = 1
over the dual numbers and reading off the eps coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, combinations_with_replacement, permutations, product
from math import comb

from .errors import DomainError, NotInvertible, Unsupported


class DualNumber:
    """Element re + eps*ep of R[eps]/(eps^2)."""

    __slots__ = ("ep", "re")

    def __init__(self, re, ep=0):
        self.re = re
        self.ep = ep

    def __add__(self, other):
        if isinstance(other, DualNumber):
            return DualNumber(self.re + other.re, self.ep + other.ep)
        return DualNumber(self.re + other, self.ep)

    __radd__ = __add__

    def __neg__(self):
        return DualNumber(-self.re, -self.ep)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, DualNumber):
            return DualNumber(self.re * other.re, self.re * other.ep + self.ep * other.re)
        return DualNumber(self.re * other, self.ep * other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, DualNumber):
            return self.re == other.re and self.ep == other.ep
        return self.re == other and self.ep == 0

    __hash__ = None

    def inverse(self) -> DualNumber:
        r = ring_inverse(self.re)
        return DualNumber(r, -self.ep * r * r)

    def __repr__(self):
        return f"DualNumber({self.re}, {self.ep})"


def ring_inverse(x):
    if isinstance(x, DualNumber):
        return x.inverse()
    if isinstance(x, (int, Fraction)):
        if x == 0:
            raise NotInvertible("zero is not invertible")
        return Fraction(1) / x
    try:
        inv = 1 / x
    except ZeroDivisionError as exc:
        raise NotInvertible(f"{x} is not invertible") from exc
    return inv


def ring_power(x, m: int):
    if m < 0:
        return ring_power(ring_inverse(x), -m)
    out = 1
    for _ in range(m):
        out = out * x
    return out


def eps_part(x):
    return x.ep if isinstance(x, DualNumber) else 0


# generic matrix helpers over a commutative ring


def mat_mul(a, b):
    n, m, k = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][t] * b[t][j] for t in range(m)), 0) for j in range(k)] for i in range(n)]


def mat_vec(a, v):
    return [sum((row[t] * v[t] for t in range(len(v))), 0) for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)] if a else []


def identity(n, one=1):
    return [[one if i == j else 0 for j in range(n)] for i in range(n)]


def _perm_sign(perm) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def determinant(a):
    """Leibniz expansion; fine for the small sizes used here and ring-agnostic."""
    n = len(a)
    if n == 0:
        return 1
    total = 0
    for perm in permutations(range(n)):
        term = _perm_sign(perm)
        for i, j in enumerate(perm):
            term = term * a[i][j]
        total = total + term
    return total


def mat_inverse(a):
    """Adjugate over the determinant; raises NotInvertible if det is not a unit."""
    n = len(a)
    det_inv = ring_inverse(determinant(a))
    if n == 1:
        return [[det_inv]]
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[a[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = determinant(minor)
            if (i + j) % 2:
                cof = -cof
            out[j][i] = cof * det_inv
    return out


# construction trees


@dataclass(frozen=True)
class Std:
    pass


@dataclass(frozen=True)
class Dual:
    of: object


@dataclass(frozen=True)
class Sym:
    k: int
    of: object = Std()


@dataclass(frozen=True)
class Wedge:
    k: int
    of: object = Std()


@dataclass(frozen=True)
class Tensor:
    left: object
    right: object


@dataclass(frozen=True)
class DetPower:
    m: int


@dataclass(frozen=True)
class SimTwist:
    m: int


@dataclass(frozen=True)
class Trivial:
    pass


def _labels(expr, g: int) -> tuple:
    if isinstance(expr, Std):
        return tuple((i,) for i in range(g))
    if isinstance(expr, (Trivial, DetPower, SimTwist)):
        return ((),)
    if isinstance(expr, Dual):
        return _labels(expr.of, g)
    if isinstance(expr, Sym):
        if expr.k < 0:
            raise DomainError("symmetric power must be non-negative")
        return tuple(combinations_with_replacement(range(len(_labels(expr.of, g))), expr.k))
    if isinstance(expr, Wedge):
        if expr.k < 0:
            raise DomainError("exterior power must be non-negative")
        return tuple(combinations(range(len(_labels(expr.of, g))), expr.k))
    if isinstance(expr, Tensor):
        return tuple(product(range(len(_labels(expr.left, g))), range(len(_labels(expr.right, g)))))
    raise TypeError(f"unknown representation node {expr!r}")


def _expected_rank(expr, g: int) -> int:
    if isinstance(expr, Std):
        return g
    if isinstance(expr, (Trivial, DetPower, SimTwist)):
        return 1
    if isinstance(expr, Dual):
        return _expected_rank(expr.of, g)
    if isinstance(expr, Sym):
        n = _expected_rank(expr.of, g)
        return comb(expr.k + n - 1, n - 1) if n else int(expr.k == 0)
    if isinstance(expr, Wedge):
        return comb(_expected_rank(expr.of, g), expr.k)
    if isinstance(expr, Tensor):
        return _expected_rank(expr.left, g) * _expected_rank(expr.right, g)
    raise TypeError(f"unknown representation node {expr!r}")


def _sym_matrix(inner, labels):
    """Matrix of Sym^k(inner) on sorted multiset labels."""
    pos = {lab: n for n, lab in enumerate(labels)}
    size = len(labels)
    out = [[0] * size for _ in range(size)]
    dim = len(inner)
    for col, lab in enumerate(labels):
        poly = {(): 1}
        for b in lab:
            nxt: dict = {}
            for mono, c in poly.items():
                for l in range(dim):
                    entry = inner[l][b]
                    if entry == 0:
                        continue
                    key = tuple(sorted(mono + (l,)))
                    nxt[key] = nxt.get(key, 0) + c * entry
            poly = nxt
        for mono, c in poly.items():
            out[pos[mono]][col] = c
    return out


def _evaluate(expr, a, nu, g: int):
    if isinstance(expr, Std):
        return [list(row) for row in a]
    if isinstance(expr, Trivial):
        return [[1]]
    if isinstance(expr, DetPower):
        return [[ring_power(determinant(a), expr.m)]]
    if isinstance(expr, SimTwist):
        return [[ring_power(nu, expr.m)]]
    if isinstance(expr, Dual):
        return transpose(_evaluate(expr.of, mat_inverse(a), ring_inverse(nu), g))
    if isinstance(expr, Sym):
        return _sym_matrix(_evaluate(expr.of, a, nu, g), _labels(expr, g))
    if isinstance(expr, Wedge):
        inner = _evaluate(expr.of, a, nu, g)
        labels = _labels(expr, g)
        return [
            [determinant([[inner[r][c] for c in cols] for r in rows]) for cols in labels]
            for rows in labels
        ]
    if isinstance(expr, Tensor):
        left = _evaluate(expr.left, a, nu, g)
        right = _evaluate(expr.right, a, nu, g)
        labels = _labels(expr, g)
        return [[left[i][k] * right[j][l] for (k, l) in labels] for (i, j) in labels]
    raise TypeError(f"unknown representation node {expr!r}")


@dataclass(frozen=True)
class Representation:
    expr: object
    g: int

    @cached_property
    def basis(self) -> tuple:
        return _labels(self.expr, self.g)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def expected_rank(self) -> int:
        return _expected_rank(self.expr, self.g)

    def matrix(self, a, nu=1):
        return _evaluate(self.expr, a, nu, self.g)

    def label(self, n: int) -> str:
        return _label_text(self.expr, self.basis[n], self.g)

    def to_json(self) -> dict:
        return rep_to_json(self.expr)


def _label_text(expr, lab, g) -> str:
    if isinstance(expr, Std):
        return f"e{lab[0] + 1}"
    if isinstance(expr, (Trivial, DetPower, SimTwist)):
        return "1"
    if isinstance(expr, Dual):
        return _label_text(expr.of, lab, g) + "*"
    inner_labels = None
    if isinstance(expr, (Sym, Wedge)):
        inner_labels = _labels(expr.of, g)
        parts = [_label_text(expr.of, inner_labels[b], g) for b in lab]
        sep = "." if isinstance(expr, Sym) else "^"
        return sep.join(parts) if parts else "1"
    if isinstance(expr, Tensor):
        left = _labels(expr.left, g)[lab[0]]
        right = _labels(expr.right, g)[lab[1]]
        return f"({_label_text(expr.left, left, g)})x({_label_text(expr.right, right, g)})"
    raise TypeError(f"unknown representation node {expr!r}")


def group_action(rho: Representation, a, nu, w):
    return mat_vec(rho.matrix(a, nu), list(w))


@lru_cache(maxsize=4096)
def _lie_matrix_cached(rho: Representation, X: tuple) -> tuple:
    g = rho.g
    a = [[DualNumber(1 if i == j else 0, X[i][j]) for j in range(g)] for i in range(g)]
    m = rho.matrix(a, DualNumber(1, 0))
    return tuple(tuple(Fraction(eps_part(x)) for x in row) for row in m)


def lie_matrix(rho: Representation, X):
    """Matrix of d rho(X) for a rational g x g matrix X."""
    key = tuple(tuple(Fraction(x) for x in row) for row in X)
    return _lie_matrix_cached(rho, key)


def lie_action(rho: Representation, X, w):
    """d rho(X) w.  Rational X uses a cached matrix; other rings evaluate directly."""
    if all(isinstance(x, (int, Fraction)) for row in X for x in row):
        return mat_vec(lie_matrix(rho, X), list(w))
    g = rho.g
    a = [[DualNumber(1 if i == j else 0, X[i][j]) for j in range(g)] for i in range(g)]
    m = rho.matrix(a, DualNumber(1, 0))
    return mat_vec([[eps_part(x) for x in row] for row in m], list(w))


def elementary(g: int, a: int, b: int):
    """E_ab with 0-based indices."""
    return [[1 if (i, j) == (a, b) else 0 for j in range(g)] for i in range(g)]


def _hw_vector(expr, g):
    if isinstance(expr, (Trivial, DetPower, SimTwist)):
        return [Fraction(1)]
    if isinstance(expr, Std):
        return [Fraction(int(i == 0)) for i in range(g)]
    if isinstance(expr, Sym) and isinstance(expr.of, Std):
        labels = _labels(expr, g)
        return [Fraction(int(lab == (0,) * expr.k)) for lab in labels]
    if isinstance(expr, Tensor):
        left = _hw_vector(expr.left, g)
        right = _hw_vector(expr.right, g)
        return [left[i] * right[j] for (i, j) in _labels(expr, g)]
    raise Unsupported(f"no built-in highest weight vector for {expr!r}")


def highest_weight_vector(rho: Representation):
    return _hw_vector(rho.expr, rho.g)


# JSON


def rep_to_json(expr) -> dict:
    if isinstance(expr, Std):
        return {"kind": "std"}
    if isinstance(expr, Trivial):
        return {"kind": "trivial"}
    if isinstance(expr, DetPower):
        return {"kind": "det", "m": expr.m}
    if isinstance(expr, SimTwist):
        return {"kind": "sim", "m": expr.m}
    if isinstance(expr, Dual):
        return {"kind": "dual", "of": rep_to_json(expr.of)}
    if isinstance(expr, Sym):
        return {"kind": "sym", "k": expr.k, "of": rep_to_json(expr.of)}
    if isinstance(expr, Wedge):
        return {"kind": "wedge", "k": expr.k, "of": rep_to_json(expr.of)}
    if isinstance(expr, Tensor):
        return {"kind": "tensor", "left": rep_to_json(expr.left), "right": rep_to_json(expr.right)}
    raise TypeError(f"unknown representation node {expr!r}")


def rep_from_json(data: dict):
    kind = data["kind"]
    if kind == "std":
        return Std()
    if kind == "trivial":
        return Trivial()
    if kind == "det":
        return DetPower(int(data["m"]))
    if kind == "sim":
        return SimTwist(int(data["m"]))
    if kind == "dual":
        return Dual(rep_from_json(data["of"]))
    if kind == "sym":
        return Sym(int(data["k"]), rep_from_json(data["of"]))
    if kind == "wedge":
        return Wedge(int(data["k"]), rep_from_json(data["of"]))
    if kind == "tensor":
        return Tensor(rep_from_json(data["left"]), rep_from_json(data["right"]))
    raise DomainError(f"unknown representation kind {kind!r}")
