"""Koszul complexes for families of module endomorphisms.

Module vectors are opaque: anything supporting ``+`` and unary ``-`` works
(rationals, q-series, induced elements, numpy object arrays).  Operators are
plain callables.  Components of a ``KoszulElement`` are indexed by strictly
increasing tuples drawn from 1..n.

Notation used below, for a multi-index i and 1 <= k <= n:

* ``k ^ i`` is i with k inserted, or None when k already occurs in i;
* ``eps_i(k)`` counts the entries of i smaller than k;
* ``i_k`` is i with k removed, or None when k does not occur in i.

Note that the sign of the commutator correction in the homotopy formula
is the one making ``delK dK + dK delK = delta_dot + delta_bracket`` hold,
namely ``(-1)^(eps_B(k) + eps_B(l) + 1)`` for the term [psi_l, phi_k]
with B the common part of source and target indices.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from itertools import combinations

MultiIndex = tuple


def is_zero_vector(v) -> bool:
    zero_test = getattr(v, "is_zero", None)
    if callable(zero_test):
        return bool(zero_test())
    if hasattr(v, "any") and hasattr(v, "shape"):
        return not (v != 0).any()
    return v == 0


def multiindex_ops(k: int, i: MultiIndex):
    """Return (k ^ i, eps_i(k), i_k) with None standing for an empty result."""
    eps = sum(1 for x in i if x < k)
    if k in i:
        return None, eps, tuple(x for x in i if x != k)
    return tuple(sorted(i + (k,))), eps, None


def multiindices(n: int, p: int) -> list[MultiIndex]:
    return list(combinations(range(1, n + 1), p))


@dataclass(frozen=True)
class OperatorFamily:
    ops: tuple

    def __init__(self, ops: Sequence[Callable]):
        object.__setattr__(self, "ops", tuple(ops))

    @property
    def n(self) -> int:
        return len(self.ops)

    def __getitem__(self, k: int) -> Callable:
        return self.ops[k - 1]

    def commutes_on(self, samples, other: OperatorFamily | None = None) -> bool:
        """Check op_a op_b = op_b op_a on the samples (against ``other`` if given)."""
        other = other or self
        for v in samples:
            for a in range(1, self.n + 1):
                for b in range(1, other.n + 1):
                    if not is_zero_vector(self[a](other[b](v)) - other[b](self[a](v))):
                        return False
        return True


@dataclass
class KoszulElement:
    n: int
    degree: int
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        for idx in self.components:
            if len(idx) != self.degree or list(idx) != sorted(set(idx)) or (idx and not 1 <= idx[0] <= idx[-1] <= self.n):
                raise ValueError(f"bad multi-index {idx} for degree {self.degree}, n={self.n}")

    def pruned(self) -> KoszulElement:
        return KoszulElement(
            self.n, self.degree, {i: v for i, v in self.components.items() if not is_zero_vector(v)}
        )

    def __add__(self, other: KoszulElement) -> KoszulElement:
        out = dict(self.components)
        for i, v in other.components.items():
            out[i] = v if i not in out else out[i] + v
        return KoszulElement(self.n, self.degree, out)

    def __neg__(self) -> KoszulElement:
        return KoszulElement(self.n, self.degree, {i: -v for i, v in self.components.items()})

    def __sub__(self, other: KoszulElement) -> KoszulElement:
        return self + (-other)

    def map(self, fn) -> KoszulElement:
        return KoszulElement(self.n, self.degree, {i: fn(v) for i, v in self.components.items()})

    def is_zero(self) -> bool:
        return all(is_zero_vector(v) for v in self.components.values())

    def equals(self, other: KoszulElement) -> bool:
        return self.degree == other.degree and (self - other).is_zero()


def _add_into(out: dict, idx, value):
    out[idx] = value if idx not in out else out[idx] + value


def dK(phi: OperatorFamily, m: KoszulElement) -> KoszulElement:
    """Koszul differential K^p -> K^(p+1); zero when p = n."""
    out: dict = {}
    for i, v in m.components.items():
        for k in range(1, m.n + 1):
            target, eps, _ = multiindex_ops(k, i)
            if target is None:
                continue
            w = phi[k](v)
            _add_into(out, target, -w if eps % 2 else w)
    return KoszulElement(m.n, m.degree + 1, out).pruned()


def delK(psi: OperatorFamily, m: KoszulElement) -> KoszulElement:
    """Dual Koszul differential K^p -> K^(p-1); zero when p = 0."""
    out: dict = {}
    for i, v in m.components.items():
        for pos, k in enumerate(i):
            w = psi[k](v)
            _add_into(out, i[:pos] + i[pos + 1:], -w if pos % 2 else w)
    return KoszulElement(m.n, m.degree - 1, out).pruned()


def delta_dot(psi: OperatorFamily, phi: OperatorFamily, m: KoszulElement) -> KoszulElement:
    out: dict = {}
    for i, v in m.components.items():
        for k in range(1, m.n + 1):
            _add_into(out, i, phi[k](psi[k](v)) if k in i else psi[k](phi[k](v)))
    return KoszulElement(m.n, m.degree, out).pruned()


def delta_bracket(psi: OperatorFamily, phi: OperatorFamily, m: KoszulElement) -> KoszulElement:
    """Commutator correction: sum of +-[psi_l, phi_k] moving index l out and k in."""
    out: dict = {}
    for i, v in m.components.items():
        for l in i:
            base = tuple(x for x in i if x != l)
            for k in range(1, m.n + 1):
                if k in i:
                    continue
                target = tuple(sorted(base + (k,)))
                sign = sum(1 for x in base if x < k) + sum(1 for x in base if x < l) + 1
                w = psi[l](phi[k](v)) - phi[k](psi[l](v))
                _add_into(out, target, -w if sign % 2 else w)
    return KoszulElement(m.n, m.degree, out).pruned()


def homotopy_defect(psi: OperatorFamily, phi: OperatorFamily, m: KoszulElement) -> KoszulElement:
    """delK dK + dK delK - delta_dot - delta_bracket; zero when the identity holds."""
    lhs = delK(psi, dK(phi, m)) + dK(phi, delK(psi, m))
    return (lhs - delta_dot(psi, phi, m) - delta_bracket(psi, phi, m)).pruned()


def contraction_section(
    psi: OperatorFamily,
    phi: OperatorFamily,
    p: int,
    delta_inverse: Callable[[KoszulElement], KoszulElement],
    variant: str = "pre",
) -> Callable[[KoszulElement], KoszulElement]:
    """s^p = delK o Delta^-1 ("pre") or Delta^-1 o delK ("post"), K^p -> K^(p-1).

    ``delta_inverse`` must invert delta_dot + delta_bracket on the relevant
    degree; for commuting families the bracket term vanishes.
    """
    if variant not in ("pre", "post"):
        raise ValueError("variant must be 'pre' or 'post'")

    def section(m: KoszulElement) -> KoszulElement:
        if m.degree != p:
            raise ValueError(f"section expects degree {p}, got {m.degree}")
        if variant == "pre":
            return delK(psi, delta_inverse(m))
        return delta_inverse(delK(psi, m))

    return section
