"""Polynomial ring in z_1..z_n, zb_1..zb_n with the fixed degrevlex order.

Polynomials are sympy ``PolyElement`` values: sparse dicts from exponent
tuples ``alpha + beta`` (length 2n) to ``QQ`` coefficients.  The generator
order z_1 > ... > z_n > zb_1 > ... > zb_n together with ``grevlex`` is part
of the external contract, since normal forms depend on it.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyElement, PolyRing

from ..errors import ValidationError

Poly = PolyElement
Monomial = Tuple[int, ...]


@lru_cache(maxsize=None)
def phase_ring(n: int) -> PolyRing:
    if n < 1:
        raise ValidationError("座標の個数 n は 1 以上で指定してください。")
    names = [f"z{k}" for k in range(1, n + 1)] + [f"zb{k}" for k in range(1, n + 1)]
    return PolyRing(names, QQ, grevlex)


def coordinate_count(ring: PolyRing) -> int:
    return ring.ngens // 2


def to_qq(value: Fraction | int) -> object:
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def to_fraction(coeff: object) -> Fraction:
    return Fraction(int(coeff.numerator), int(coeff.denominator))  # type: ignore[attr-defined]


def split_monomial(monom: Monomial) -> Tuple[Monomial, Monomial]:
    n = len(monom) // 2
    return monom[:n], monom[n:]


def monomial(ring: PolyRing, alpha: Sequence[int], beta: Sequence[int], coeff: Fraction | int = 1) -> Poly:
    return ring({tuple(alpha) + tuple(beta): to_qq(coeff)})


def z(ring: PolyRing, j: int) -> Poly:
    """Holomorphic coordinate ``z_{j+1}`` (0-based index)."""

    return ring.gens[j]


def zbar(ring: PolyRing, j: int) -> Poly:
    """Antiholomorphic coordinate ``zb_{j+1}`` (0-based index)."""

    return ring.gens[coordinate_count(ring) + j]
