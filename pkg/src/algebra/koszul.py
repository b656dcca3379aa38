"""Koszul complex on the moment map: differential, graded homology, splitting."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy.polys.rings import PolyRing

from ..action import MomentMap, WeightMatrix, moment_map
from ..errors import RefusedError, ValidationError
from ..exact import QMatrix
from .chain import KoszulChain, Subset
from .groebner import TrackedGroebnerBasis, groebner, normal_form, reduces_to_zero
from .ring import Monomial, Poly, to_fraction, to_qq, z, zbar

logger = logging.getLogger(__name__)

Generators = Union[MomentMap, Sequence[Poly]]


def _components(J: Generators) -> Tuple[Poly, ...]:
    return J.components if isinstance(J, MomentMap) else tuple(J)


def koszul_differential(chain: KoszulChain, J: Generators) -> KoszulChain:
    """``∂ = Σ_i J_i ι(e^i)`` with ``ι(e^i) e_S = (-1)^p e_{S∖i}``, p the position of i in S."""

    if chain.degree == 0:
        raise ValidationError("次数 0 の鎖に微分は定義されません。")
    components = _components(J)
    result: Dict[Subset, Poly] = {}
    for subset, coeff in chain:
        for p, i in enumerate(subset):
            if i >= len(components):
                raise ValidationError(f"添字 {i + 1} が生成元の個数を超えています。")
            target = subset[:p] + subset[p + 1:]
            term = components[i] * coeff
            if p % 2:
                term = -term
            result[target] = result.get(target, chain.ring.zero) + term
    return KoszulChain(chain.ring, chain.degree - 1, result)


@dataclass(frozen=True)
class HomologyTable:
    """``dims[(i, d)] = dim H_i`` in total degree ``d`` (chain coefficients of degree ``d - 2i``)."""

    ell: int
    maxdeg: int
    dims: Dict[Tuple[int, int], int]
    witnesses: Dict[Tuple[int, int], KoszulChain] = field(default_factory=dict)

    @property
    def acyclic(self) -> bool:
        return all(v == 0 for v in self.dims.values())

    def nonzero(self) -> List[Tuple[int, int]]:
        return [key for key, v in sorted(self.dims.items()) if v]


def _exponents(length: int, total: int):
    if length == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in _exponents(length - 1, total - head):
            yield (head,) + tail


def _monomials_by_shift(n: int, degree: int) -> Dict[Tuple[int, ...], List[Monomial]]:
    # Multiplying by z_j zb_j preserves alpha - beta, so the complex splits by it.
    blocks: Dict[Tuple[int, ...], List[Monomial]] = {}
    if degree < 0:
        return blocks
    for monom in _exponents(2 * n, degree):
        shift = tuple(a - b for a, b in zip(monom[:n], monom[n:]))
        blocks.setdefault(shift, []).append(monom)
    return blocks


def _differential_matrix(
    ring: PolyRing,
    components: Sequence[Poly],
    sources: List[Tuple[Subset, Monomial]],
    targets: List[Tuple[Subset, Monomial]],
) -> QMatrix:
    index = {key: r for r, key in enumerate(targets)}
    rows = [[Fraction(0)] * len(sources) for _ in targets]
    for c, (subset, monom) in enumerate(sources):
        image = koszul_differential(KoszulChain(ring, len(subset), {subset: ring({monom: 1})}), components)
        for target_subset, poly in image:
            for m, coeff in poly.items():
                rows[index[(target_subset, m)]][c] += to_fraction(coeff)
    return QMatrix.from_rows(rows, len(sources))


def graded_koszul_homology(J: Union[MomentMap, WeightMatrix], maxdeg: int) -> HomologyTable:
    """Exact dimensions of ``H_i`` (i >= 1) of the Koszul complex in degrees <= maxdeg.

    Only the homogeneous moment map is accepted.
    """

    if isinstance(J, WeightMatrix):
        J = moment_map(J)
    if not J.is_homogeneous:
        raise RefusedError("Koszul ホモロジーの計算は mu = 0 の場合のみ対応しています。")
    if maxdeg < 0:
        raise ValidationError("maxdeg は 0 以上で指定してください。")

    ring, components = J.ring, J.components
    ell, n = J.weights.ell, J.weights.n
    subsets = {i: list(itertools.combinations(range(ell), i)) for i in range(ell + 1)}
    dims: Dict[Tuple[int, int], int] = {}
    witnesses: Dict[Tuple[int, int], KoszulChain] = {}

    for d in range(maxdeg + 1):
        blocks = {i: _monomials_by_shift(n, d - 2 * i) for i in range(ell + 2)}
        shifts = sorted({s for i in range(ell + 1) for s in blocks[i]})
        for i in range(1, ell + 1):
            total = 0
            for shift in shifts:
                basis = {
                    k: [(S, m) for S in subsets.get(k, []) for m in blocks[k].get(shift, [])]
                    for k in (i - 1, i, i + 1)
                }
                if not basis[i]:
                    continue
                boundary = _differential_matrix(ring, components, basis[i], basis[i - 1])
                incoming = (
                    _differential_matrix(ring, components, basis[i + 1], basis[i])
                    if basis[i + 1]
                    else QMatrix.from_rows([[] for _ in basis[i]], 0)
                )
                rank_out = boundary.rank() if basis[i - 1] else 0
                rank_in = incoming.rank() if basis[i + 1] else 0
                dim = len(basis[i]) - rank_out - rank_in
                total += dim
                if dim and (i, d) not in witnesses:
                    witnesses[(i, d)] = _non_boundary_cycle(ring, boundary, incoming, basis[i], rank_in)
            dims[(i, d)] = total
        logger.debug("Koszul degree done", extra={"degree": d})

    table = HomologyTable(ell, maxdeg, dims, witnesses)
    if not table.acyclic:
        logger.info("Koszul complex not acyclic", extra={"nonzero": table.nonzero()})
    return table


def _non_boundary_cycle(
    ring: PolyRing,
    boundary: QMatrix,
    incoming: QMatrix,
    basis: List[Tuple[Subset, Monomial]],
    rank_in: int,
) -> KoszulChain:
    cycles = boundary.nullspace() if boundary.nrows else [
        tuple(Fraction(int(r == c)) for r in range(len(basis))) for c in range(len(basis))
    ]
    for vector in cycles:
        extended = QMatrix.from_rows(
            [list(row) + [x] for row, x in zip(incoming.rows, vector)], incoming.ncols + 1
        )
        if extended.rank() > rank_in:
            terms: Dict[Subset, Poly] = {}
            for (subset, monom), x in zip(basis, vector):
                if x:
                    terms[subset] = terms.get(subset, ring.zero) + ring({monom: to_qq(x)})
            return KoszulChain(ring, len(basis[0][0]), terms)
    raise AssertionError("homology dimension positive but no non-boundary cycle found")


def _is_upper_triangular(weights: WeightMatrix) -> bool:
    if weights.ell > weights.n:
        return False
    return all(
        weights.entries[i][i] != 0 and all(weights.entries[i][j] == 0 for j in range(i))
        for i in range(weights.ell)
    )


def regular_sequence_fixture_check(weights: WeightMatrix) -> bool:
    """``(J_1..J_ell, z_j zb_j for j > ell)`` equals ``(z_1 zb_1, ..., z_n zb_n)``."""

    if not _is_upper_triangular(weights):
        raise ValidationError("上三角で対角成分が 0 でない重み行列を指定してください。")
    J = moment_map(weights)
    ring = J.ring
    squares = [z(ring, j) * zbar(ring, j) for j in range(weights.n)]
    gb = groebner(ring, list(J.components) + squares[weights.ell:])
    monomial_gb = groebner(ring, squares)
    forward = all(reduces_to_zero(s, gb) for s in squares)
    backward = all(reduces_to_zero(g, monomial_gb) for g in gb.generators)
    return forward and backward


@dataclass(frozen=True)
class Splitting:
    """Degree-0 splitting ``id = prol∘res + ∂_1∘h0`` of the augmented Koszul complex."""

    moment: MomentMap
    gb: TrackedGroebnerBasis

    @property
    def ring(self) -> PolyRing:
        return self.gb.ring

    def res(self, f: Poly) -> Poly:
        return normal_form(f, self.gb)[0]

    def prol(self, g: Poly) -> Poly:
        return self.ring(g)

    def h0(self, f: Poly) -> KoszulChain:
        return normal_form(f, self.gb)[1]

    def identity_holds(self, f: Poly) -> bool:
        rebuilt = self.prol(self.res(f)) + koszul_differential(self.h0(f), self.moment).as_poly()
        return rebuilt == self.ring(f)


def build_splitting(weights: WeightMatrix, mu: Optional[Sequence[object]] = None) -> Splitting:
    J = moment_map(weights, mu)
    return Splitting(J, groebner(J.ring, J.components))
