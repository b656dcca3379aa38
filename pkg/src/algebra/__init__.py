"""Polynomial algebra on phase space: the ring, Koszul chains and Gröbner bases.

The Koszul complex of a moment map is in ``src.algebra.koszul``, which imports
``src.action``; import it from there.
"""

from .chain import KoszulChain
from .groebner import TrackedGroebnerBasis, groebner, normal_form, reduces_to_zero
from .ring import Poly, phase_ring

__all__ = [
    "KoszulChain",
    "Poly",
    "TrackedGroebnerBasis",
    "groebner",
    "normal_form",
    "phase_ring",
    "reduces_to_zero",
]
