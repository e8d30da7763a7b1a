"""Exact integration of P-depleted closed forms on Siegel-type q-expansions.

The modules build on each other in this order: ``arith`` (rationals with a
p-adic context), ``qseries`` (matrix-indexed q-expansions and theta
operators), ``rep`` (construction-tree representations of GL_g x G_m),
``induced`` (polynomial induced modules and their u^- action), ``koszul``
(generic Koszul differentials and homotopies), ``derham`` (the trivialized
de Rham complex and the primitive solver) and ``genus1`` (the one-variable
elliptic special case).
"""

from .arith import PadicContext

__all__ = ["PadicContext"]
__version__ = "0.1.0"
