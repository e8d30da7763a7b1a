"""Exact rationals with a p-adic context.

Coefficients are plain ``fractions.Fraction`` values, which are already kept
in lowest terms with a positive denominator.  The context carries the prime,
the working precision, the tame level and the genus; p-adic data (valuation,
residues) is computed on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidContext, NotAUnit, NotIntegral

INFINITY = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PadicContext:
    p: int
    precision: int = 20
    N: int = 1
    g: int = 1

    def __post_init__(self):
        if not is_prime(self.p) or self.p < 3:
            raise InvalidContext(f"p must be an odd prime, got {self.p}")
        if math.gcd(self.p, 2 * self.N) != 1:
            raise InvalidContext(f"p={self.p} must not divide 2N={2 * self.N}")
        if self.precision < 1:
            raise InvalidContext("precision must be positive")
        if self.g < 1:
            raise InvalidContext("genus must be at least 1")

    @property
    def d_g(self) -> int:
        return self.g * (self.g + 1) // 2

    @property
    def modulus(self) -> int:
        return self.p ** self.precision


def as_fraction(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(c, ctx: PadicContext):
    """p-adic valuation; ``math.inf`` for zero."""
    c = as_fraction(c)
    if c == 0:
        return INFINITY
    return _int_valuation(abs(c.numerator), ctx.p) - _int_valuation(c.denominator, ctx.p)


def invert_unit(c, ctx: PadicContext) -> Fraction:
    c = as_fraction(c)
    if valuation(c, ctx) != 0:
        raise NotAUnit(f"{c} is not a {ctx.p}-adic unit")
    return 1 / c


def reduce_mod(c, ctx: PadicContext) -> int:
    """Residue of a p-integral rational modulo p^precision."""
    c = as_fraction(c)
    if valuation(c, ctx) < 0:
        raise NotIntegral(f"{c} is not {ctx.p}-integral")
    m = ctx.modulus
    return c.numerator * pow(c.denominator, -1, m) % m


def format_fraction(c) -> str:
    return str(as_fraction(c))


def parse_fraction(text) -> Fraction:
    return Fraction(text) if isinstance(text, str) else as_fraction(text)
