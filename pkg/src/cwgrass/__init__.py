"""Chow-Witt rings of Grassmannians and of BGL_n.

Modules: coeffs (Witt models), symcore (partitions, Schur expansion, integer
and F2 linear algebra), chow, steenrod, wcoh, icoh, bgl, chowwitt, oracle, cli.
"""

from .chow import bgl_truncated, chow_mul, complementary_class, grassmannian, mod2_reduce
from .chowwitt import cw_euler, cw_group, cw_mul, cw_pontryagin
from .coeffs import witt_model
from .icoh import CharClass, bockstein, char_class, i_mul, i_space, i_table, rho
from .steenrod import ker_partial, sq2, sq2_image, sq2_kernel
from .wcoh import euler_mult_check, poincare_series, w_basis, w_mul, w_ring

__version__ = "0.1.0"

__all__ = [
    "grassmannian",
    "bgl_truncated",
    "chow_mul",
    "complementary_class",
    "mod2_reduce",
    "witt_model",
    "sq2",
    "sq2_kernel",
    "sq2_image",
    "ker_partial",
    "w_ring",
    "w_mul",
    "w_basis",
    "poincare_series",
    "euler_mult_check",
    "i_space",
    "char_class",
    "CharClass",
    "i_mul",
    "rho",
    "bockstein",
    "i_table",
    "cw_group",
    "cw_mul",
    "cw_euler",
    "cw_pontryagin",
]
