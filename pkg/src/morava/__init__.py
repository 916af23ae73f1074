"""Finite-precision models of the height-2 Morava stabilizer group at p = 2 and checks on its duality resolution."""

from .endo import EndoElt, FGLTag, e_standard
from .gtwo import GElt, g_element
from .quotients import QuotientGroup, q_build
from .resolution import CheckReport, res_check, res_suite
from .witt import WittApprox, w_constant

__all__ = [
    "CheckReport",
    "EndoElt",
    "FGLTag",
    "GElt",
    "QuotientGroup",
    "WittApprox",
    "e_standard",
    "g_element",
    "q_build",
    "res_check",
    "res_suite",
    "w_constant",
]
