"""Polynomial induced modules W (x) k[Y_ij] and their Lie algebra actions.

An element maps each Y-monomial (an exponent vector in the fixed
(i,j) <-> 1..d_g order) to a W-vector.  It is stored flat as
``{(ymono, basis_index): coeff}`` so coefficients can be rationals or whole
q-series; only ``+``, ``-``, ``bool`` and multiplication by ``Fraction`` are
required of them.

The parabolic elements [[a, b], [0, d]] with d = nu a^{-t} act by
``(gf)(Y) = rho(a, nu) f(a^{-1}(b + Y d))``.  The opposite unipotent
direction x (a symmetric matrix) acts by differentiating the big-cell
action at [[1, 0], [eps x, 1]]:

    (x f)(Y) = d rho(Y x) f(Y) - D_{Y x Y} f(Y)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache, lru_cache
from typing import NamedTuple

from .arith import format_fraction, parse_fraction
from .errors import NotInParabolic, NotInvertible, Truncated
from .qseries import index_pairs, pair_position
from .rep import (
    Representation,
    determinant,
    lie_action,
    lie_matrix,
    mat_inverse,
    mat_mul,
    rep_from_json,
    transpose,
)


def _accumulate(out: dict, key, value):
    current = out.get(key)
    out[key] = value if current is None else current + value


class InducedElement:
    __slots__ = ("rep", "terms")

    def __init__(self, rep: Representation, terms=None):
        self.rep = rep
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @property
    def g(self) -> int:
        return self.rep.g

    def __add__(self, other):
        if not isinstance(other, InducedElement):
            if other == 0:
                return self
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            _accumulate(out, k, c)
        return InducedElement(self.rep, out)

    __radd__ = __add__

    def __neg__(self):
        return InducedElement(self.rep, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> InducedElement:
        return InducedElement(self.rep, {k: s * c for k, c in self.terms.items()})

    def __mul__(self, s):
        if isinstance(s, (int, Fraction)):
            return self.scale(s)
        return NotImplemented

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, InducedElement):
            return NotImplemented
        return self.rep == other.rep and not (self - other).terms

    __hash__ = None

    def map_coefficients(self, fn) -> InducedElement:
        return InducedElement(self.rep, {k: fn(c) for k, c in self.terms.items()})

    def degrees(self) -> set[int]:
        return {sum(m) for m, _ in self.terms}

    def monomials(self) -> list:
        return sorted({m for m, _ in self.terms})

    def wvector(self, ymono, zero=Fraction(0)) -> list:
        return [self.terms.get((tuple(ymono), w), zero) for w in range(self.rep.rank)]

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kc: (sum(kc[0][0]), kc[0]))

    def to_json(self, coeff_to_json=format_fraction, zero=Fraction(0)) -> dict:
        return {
            "rep": self.rep.to_json(),
            "terms": [
                {"ymono": list(m), "wvec": [coeff_to_json(c) for c in self.wvector(m, zero)]}
                for m in self.monomials()
            ],
        }

    @classmethod
    def from_json(cls, data: dict, g: int, coeff_from_json=parse_fraction) -> InducedElement:
        rep = Representation(rep_from_json(data["rep"]), g)
        terms = {}
        for t in data["terms"]:
            mono = tuple(int(e) for e in t["ymono"])
            if len(mono) != g * (g + 1) // 2:
                raise ValueError(f"Y-monomial {mono} has the wrong length for genus {g}")
            for w, c in enumerate(t["wvec"]):
                _accumulate(terms, (mono, w), coeff_from_json(c))
        return cls(rep, terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (m, w), c in self.sorted_items():
            y = "*".join(
                f"Y{i + 1}{j + 1}" + (f"^{e}" if e > 1 else "")
                for (i, j), e in zip(index_pairs(self.g), m)
                if e
            )
            parts.append(f"({c!r}){self.rep.label(w)}" + (f"*{y}" if y else ""))
        return " + ".join(parts)


def zero_element(rep: Representation) -> InducedElement:
    return InducedElement(rep, {})


def embed_constant(rep: Representation, w) -> InducedElement:
    """The constant function Y -> w, in Y-degree 0."""
    zero = (0,) * (rep.g * (rep.g + 1) // 2)
    return InducedElement(rep, {(zero, n): c for n, c in enumerate(w) if c})


def monomial_element(rep: Representation, ymono, widx: int, coeff=Fraction(1)) -> InducedElement:
    return InducedElement(rep, {(tuple(ymono), widx): coeff})


def grade(v: InducedElement, r: int) -> InducedElement:
    return InducedElement(v.rep, {k: c for k, c in v.terms.items() if sum(k[0]) == r})


def graded_pieces(v: InducedElement) -> dict[int, InducedElement]:
    out: dict[int, dict] = {}
    for k, c in v.terms.items():
        out.setdefault(sum(k[0]), {})[k] = c
    return {r: InducedElement(v.rep, t) for r, t in sorted(out.items())}


# symmetric matrices and polynomial helpers


def sym_basis(g: int, i: int) -> tuple:
    """The symmetric matrix x_kl attached to the 1-based index i."""
    k, l = index_pairs(g)[i - 1]
    m = [[Fraction(0)] * g for _ in range(g)]
    m[k][l] = Fraction(1)
    m[l][k] = Fraction(1)
    return tuple(tuple(row) for row in m)


def _freeze(x) -> tuple:
    return tuple(tuple(Fraction(e) for e in row) for row in x)


def _mono_times(mono, pos: int, delta: int = 1) -> tuple:
    m = list(mono)
    m[pos] += delta
    return tuple(m)


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


# the u^- action


@cache
def _rho_dot_rows(rep: Representation, x: tuple) -> tuple:
    """For each (a, c): the matrix of d rho(E_a (x) row_c), whose sum against Y_ac gives d rho(Y x)."""
    g = rep.g
    out = []
    for a in range(g):
        for c in range(g):
            X = [[x[c][b] if r == a else Fraction(0) for b in range(g)] for r in range(g)]
            if any(x[c]):
                out.append((pair_position(g)[(a, c)], lie_matrix(rep, X)))
    return tuple(out)


@cache
def _yxy_quadratics(g: int, x: tuple) -> tuple:
    """(Y x Y)_ij as a list of (pos1, pos2, coeff) for every variable position."""
    pos = pair_position(g)
    out = []
    for i, j in index_pairs(g):
        terms = {}
        for a in range(g):
            for b in range(g):
                if x[a][b]:
                    key = (pos[(i, a)], pos[(b, j)])
                    terms[key] = terms.get(key, 0) + x[a][b]
        out.append(tuple((p1, p2, c) for (p1, p2), c in terms.items() if c))
    return tuple(out)


@lru_cache(maxsize=200000)
def basis_uminus(rep: Representation, x: tuple, mono: tuple, widx: int) -> tuple:
    """The action of x on the basis element e_widx * Y^mono, as ((mono, w), coeff) pairs."""
    out: dict = {}
    for pos, mat in _rho_dot_rows(rep, x):
        target = _mono_times(mono, pos)
        for w in range(rep.rank):
            c = mat[w][widx]
            if c:
                _accumulate(out, (target, w), c)
    quads = _yxy_quadratics(rep.g, x)
    for n, e in enumerate(mono):
        if not e:
            continue
        lowered = _mono_times(mono, n, -1)
        for p1, p2, c in quads[n]:
            target = _mono_times(_mono_times(lowered, p1), p2)
            _accumulate(out, (target, widx), -e * c)
    return tuple((k, c) for k, c in out.items() if c)


def uminus_action(x, v: InducedElement) -> InducedElement:
    """Action of the symmetric matrix x in the opposite unipotent Lie algebra."""
    x = _freeze(x)
    out: dict = {}
    for (mono, w), c in v.terms.items():
        for key, r in basis_uminus(v.rep, x, mono, w):
            _accumulate(out, key, r * c)
    return InducedElement(v.rep, out)


def derivation(i: int, v: InducedElement) -> InducedElement:
    """The operator d_i, i.e. the action of x_kl for the pair attached to i."""
    return uminus_action(sym_basis(v.g, i), v)


# the parabolic group action


def _parabolic_substitution(a, b, nu):
    """Linear polynomials for the entries of a^{-1}(b + Y d), d = nu a^{-t}."""
    g = len(a)
    a = [[Fraction(e) for e in row] for row in a]
    b = [[Fraction(e) for e in row] for row in b]
    nu = Fraction(nu)
    if mat_mul(a, transpose(b)) != mat_mul(b, transpose(a)):
        raise NotInParabolic("a b^t must equal b a^t")
    if determinant(a) == 0:
        raise NotInvertible("a is singular")
    if nu == 0:
        raise NotInvertible("the similitude factor must be a unit")
    a_inv = mat_inverse(a)
    d = [[nu * e for e in row] for row in transpose(a_inv)]
    a_inv_b = mat_mul(a_inv, b)
    pos = pair_position(g)
    d_g = g * (g + 1) // 2
    zero = (0,) * d_g
    polys = []
    for i, j in index_pairs(g):
        poly: dict = {}
        if a_inv_b[i][j]:
            poly[zero] = a_inv_b[i][j]
        for k in range(g):
            if not a_inv[i][k]:
                continue
            for l in range(g):
                c = a_inv[i][k] * d[l][j]
                if c:
                    m = _mono_times(zero, pos[(k, l)])
                    poly[m] = poly.get(m, 0) + c
        polys.append({m: c for m, c in poly.items() if c})
    return polys


def q_group_action(a, b, nu, v: InducedElement) -> InducedElement:
    polys = _parabolic_substitution(a, b, nu)
    rho = v.rep.matrix([[Fraction(e) for e in row] for row in a], Fraction(nu))
    d_g = len(polys)
    cache: dict = {}

    def substituted(mono):
        if mono not in cache:
            poly = {(0,) * d_g: Fraction(1)}
            for n, e in enumerate(mono):
                for _ in range(e):
                    poly = _poly_mul(poly, polys[n])
            cache[mono] = poly
        return cache[mono]

    out: dict = {}
    for (mono, w), c in v.terms.items():
        poly = substituted(mono)
        for w2 in range(v.rep.rank):
            r = rho[w2][w]
            if not r:
                continue
            for m2, pc in poly.items():
                _accumulate(out, (m2, w2), (r * pc) * c)
    return InducedElement(v.rep, out)


def frobenius_element(p: int, g: int):
    """(a, b, nu) for m0 = diag(p 1_g, 1_g) with similitude p."""
    a = [[Fraction(p if i == j else 0) for j in range(g)] for i in range(g)]
    b = [[Fraction(0)] * g for _ in range(g)]
    return a, b, Fraction(p)


# exact linear algebra over the rationals


class _Echelon:
    """Reduced row echelon form over sparse rational rows keyed by sortable columns.

    Pivots are the smallest column of each row, rows are inserted in order
    and the inserted row is fully reduced, so the result only depends on the
    input order.
    """

    def __init__(self):
        self.rows: dict = {}  # pivot column -> row dict

    def _reduce(self, vec: dict) -> dict:
        vec = {k: c for k, c in vec.items() if c}
        for piv, row in self.rows.items():
            c = vec.get(piv)
            if c:
                for k, rc in row.items():
                    nv = vec.get(k, 0) - c * rc
                    if nv:
                        vec[k] = nv
                    else:
                        vec.pop(k, None)
        return vec

    def insert(self, vec: dict) -> bool:
        vec = self._reduce(vec)
        if not vec:
            return False
        piv = min(vec)
        lead = vec[piv]
        vec = {k: c / lead for k, c in vec.items()}
        for row in self.rows.values():
            c = row.get(piv)
            if c:
                for k, vc in vec.items():
                    nv = row.get(k, 0) - c * vc
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        self.rows[piv] = vec
        return True

    def ordered(self) -> list:
        return [self.rows[p] for p in sorted(self.rows)]

    def coordinates(self, vec: dict):
        """Coordinates against ``ordered()`` or None if vec is outside the span."""
        vec = {k: c for k, c in vec.items() if c}
        coords = []
        for piv in sorted(self.rows):
            c = vec.get(piv, Fraction(0))
            coords.append(c)
            if c:
                for k, rc in self.rows[piv].items():
                    nv = vec.get(k, 0) - c * rc
                    if nv:
                        vec[k] = nv
                    else:
                        vec.pop(k, None)
        return None if vec else coords


@dataclass
class LambdaBasis:
    """Per-degree bases of the submodule generated by a highest weight vector."""

    rep: Representation
    v_lambda: tuple
    degrees: list = field(default_factory=list)  # degree r -> list of InducedElement
    _echelons: list = field(default_factory=list, repr=False)

    @property
    def dimension(self) -> int:
        return sum(len(b) for b in self.degrees)

    @property
    def top_degree(self) -> int:
        return len(self.degrees) - 1

    def basis(self, r: int) -> list:
        return self.degrees[r] if 0 <= r < len(self.degrees) else []

    def to_json(self) -> dict:
        return {
            "rep": self.rep.to_json(),
            "dimension": self.dimension,
            "degrees": [[b.to_json() for b in basis] for basis in self.degrees],
        }


def _w_span(rep: Representation, v_lambda) -> list:
    """Span of v_lambda under the Lie algebra of GL_g acting on W."""
    g = rep.g
    ech = _Echelon()
    queue = [list(v_lambda)]
    ops = [[[Fraction(int((r, c) == (a, b))) for c in range(g)] for r in range(g)]
           for a in range(g) for b in range(g) if a != b]
    while queue:
        v = queue.pop(0)
        if ech.insert({n: Fraction(c) for n, c in enumerate(v)}):
            for X in ops:
                queue.append(lie_action(rep, X, v))
    return [[row.get(n, Fraction(0)) for n in range(rep.rank)] for row in ech.ordered()]


def generate_L_lambda(rep: Representation, v_lambda, max_degree: int = 32) -> LambdaBasis:
    """Generate the submodule of Ind(rep)[Y] spanned from a highest weight vector.

    Degree 0 is the GL_g-span of ``v_lambda`` inside the constants; each
    further degree is spanned by the d_i applied to the previous one.
    Raises ``Truncated`` if degree ``max_degree`` is still non-zero after
    the next application.
    """
    g = rep.g
    d_g = g * (g + 1) // 2
    xs = [sym_basis(g, i) for i in range(1, d_g + 1)]
    ech = _Echelon()
    for w in _w_span(rep, v_lambda):
        ech.insert(embed_constant(rep, w).terms)
    result = LambdaBasis(rep, tuple(Fraction(c) for c in v_lambda))
    while True:
        current = [InducedElement(rep, row) for row in ech.ordered()]
        result.degrees.append(current)
        result._echelons.append(ech)
        nxt = _Echelon()
        for b in current:
            for x in xs:
                nxt.insert(uminus_action(x, b).terms)
        if not nxt.rows:
            return result
        if len(result.degrees) > max_degree:
            raise Truncated(f"submodule is non-zero beyond degree {max_degree}")
        ech = nxt


class Membership(NamedTuple):
    member: bool
    coordinates: dict | None  # degree -> coordinates against LambdaBasis.basis(degree)


def membership(v: InducedElement, basis: LambdaBasis) -> Membership:
    coords = {}
    for r, piece in graded_pieces(v).items():
        if r >= len(basis._echelons):
            return Membership(False, None)
        c = basis._echelons[r].coordinates(piece.terms)
        if c is None:
            return Membership(False, None)
        coords[r] = c
    return Membership(True, coords)
