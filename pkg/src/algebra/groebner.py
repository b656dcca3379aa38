"""Buchberger's algorithm with cofactor tracking.

Every basis element remembers how it is written in terms of the input
generators, so division remainders can be traced back to ``Σ F_i J_i``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from sympy.polys.rings import PolyRing

from ..errors import ValidationError
from .chain import KoszulChain
from .ring import Poly

logger = logging.getLogger(__name__)

Cofactors = Tuple[Poly, ...]


@dataclass(frozen=True)
class TrackedGroebnerBasis:
    """Reduced Gröbner basis; ``basis[k] == Σ_i cofactors[k][i] * generators[i]``."""

    ring: PolyRing
    generators: Tuple[Poly, ...]
    basis: Tuple[Poly, ...]
    cofactors: Tuple[Cofactors, ...]

    def identity_holds(self, k: int) -> bool:
        total = self.ring.zero
        for c, g in zip(self.cofactors[k], self.generators):
            total += c * g
        return total == self.basis[k]


def _combine(ring: PolyRing, quotients: Sequence[Poly], cofactors: Sequence[Cofactors], width: int) -> List[Poly]:
    combined = [ring.zero] * width
    for q, cofs in zip(quotients, cofactors):
        if not q:
            continue
        for i, c in enumerate(cofs):
            combined[i] += q * c
    return combined


def _divide(f: Poly, basis: Sequence[Poly]) -> Tuple[List[Poly], Poly]:
    if not basis:
        return [], f
    quotients, remainder = f.div(list(basis))
    return list(quotients), remainder


def _monic(poly: Poly, cofs: Sequence[Poly]) -> Tuple[Poly, Cofactors]:
    lc = poly.LC
    return poly.quo_ground(lc), tuple(c.quo_ground(lc) for c in cofs)


def groebner(ring: PolyRing, generators: Sequence[Poly]) -> TrackedGroebnerBasis:
    """Reduced degrevlex Gröbner basis of ``(generators)`` with cofactors."""

    if not generators:
        raise ValidationError("生成元が空です。")
    gens = tuple(ring(g) for g in generators)
    width = len(gens)
    unit = [tuple(ring.one if i == k else ring.zero for i in range(width)) for k in range(width)]

    polys: List[Poly] = []
    cofs: List[Cofactors] = []
    for k, g in enumerate(gens):
        if g:
            p, c = _monic(g, unit[k])
            polys.append(p)
            cofs.append(c)

    pairs = [(i, j) for j in range(len(polys)) for i in range(j)]
    reductions = 0
    while pairs:
        i, j = pairs.pop(0)
        lm_i, lm_j = polys[i].LM, polys[j].LM
        lcm = ring.monomial_lcm(lm_i, lm_j)
        if lcm == ring.monomial_mul(lm_i, lm_j):
            continue  # coprime leading monomials
        m_i = ring.monomial_div(lcm, lm_i)
        m_j = ring.monomial_div(lcm, lm_j)
        s = polys[i].mul_monom(m_i) - polys[j].mul_monom(m_j)
        s_cofs = [a.mul_monom(m_i) - b.mul_monom(m_j) for a, b in zip(cofs[i], cofs[j])]
        quotients, remainder = _divide(s, polys)
        reductions += 1
        if not remainder:
            continue
        used = _combine(ring, quotients, cofs, width)
        r_cofs = [sc - u for sc, u in zip(s_cofs, used)]
        p, c = _monic(remainder, r_cofs)
        polys.append(p)
        cofs.append(c)
        new = len(polys) - 1
        pairs.extend((k, new) for k in range(new))

    # Minimize: drop elements whose leading monomial is divisible by another's.
    keep: List[int] = []
    for k, p in enumerate(polys):
        redundant = False
        for m, q in enumerate(polys):
            if m == k or ring.monomial_div(p.LM, q.LM) is None:
                continue
            if p.LM != q.LM or m < k:
                redundant = True
                break
        if not redundant:
            keep.append(k)

    basis = [polys[k] for k in keep]
    basis_cofs = [cofs[k] for k in keep]
    for k in range(len(basis)):
        others = basis[:k] + basis[k + 1:]
        other_cofs = basis_cofs[:k] + basis_cofs[k + 1:]
        quotients, remainder = _divide(basis[k], others)
        used = _combine(ring, quotients, other_cofs, width)
        basis[k], basis_cofs[k] = _monic(remainder, [c - u for c, u in zip(basis_cofs[k], used)])

    order = sorted(range(len(basis)), key=lambda k: ring.order(basis[k].LM), reverse=True)
    result = TrackedGroebnerBasis(
        ring,
        gens,
        tuple(basis[k] for k in order),
        tuple(basis_cofs[k] for k in order),
    )
    logger.debug(
        "Groebner basis computed",
        extra={"generators": width, "basis": len(result.basis), "s_reductions": reductions},
    )
    return result


def normal_form(f: Poly, gb: TrackedGroebnerBasis) -> Tuple[Poly, KoszulChain]:
    """Return ``(nf, witness)`` with ``f == Σ_i witness[i] * J_i + nf``.

    The witness is a degree-1 Koszul chain over the original generators and
    vanishes when ``f`` is already reduced.
    """

    ring = gb.ring
    quotients, remainder = _divide(ring(f), gb.basis)
    combined = _combine(ring, quotients, gb.cofactors, len(gb.generators))
    witness = KoszulChain(ring, 1, {(i,): c for i, c in enumerate(combined)})
    return remainder, witness


def reduces_to_zero(f: Poly, gb: TrackedGroebnerBasis) -> bool:
    return not _divide(gb.ring(f), gb.basis)[1]
