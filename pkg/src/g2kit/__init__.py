"""Finite-field computations for G2(F_q): Chevalley matrices, the Weil
representation of SL2 x Heisenberg, conjugacy classes of the Jacobi group,
Bessel-like functions and the GL1 / GL2 gamma factors built from them."""

from .ff import FieldSpec, field_of_order, prime_power
from .g2core import G2, ROOTS, POSITIVE, WEYL_WORDS, group
from .bessel import BesselLike, random_bessel_like
from .gamma_gl1 import gamma_closed, gamma_fe
from .gamma_gl2 import gamma_gl2
from .converse import compare, converse_pipeline

__all__ = ["FieldSpec", "field_of_order", "prime_power", "G2", "ROOTS", "POSITIVE",
           "WEYL_WORDS", "group", "BesselLike", "random_bessel_like", "gamma_closed",
           "gamma_fe", "gamma_gl2", "compare", "converse_pipeline"]
