"""Truncated Wick quantization and the reduced star product on invariants.

All series are handled modulo ``nu^(N+1)``. Conventions:

* Wick: ``f ⋆ g = Σ_γ nu^|γ| / γ! (∂_z^γ f)(∂_zb^γ g)``
* bracket: ``{f, g} = Σ_j (∂_{z_j} f ∂_{zb_j} g - ∂_{zb_j} f ∂_{z_j} g)``

so that ``J ⋆ f - f ⋆ J = nu {J, f}`` for every moment map component.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from math import factorial, perm
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.rings import PolyRing

from .action import MomentMap, monomial_weight
from .algebra.chain import KoszulChain, Subset
from .algebra.koszul import Splitting
from .algebra.ring import Poly, split_monomial, z, zbar
from .errors import ValidationError

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 3


class NonInvariantError(ValidationError):
    """An argument of the reduced product carries a nonzero torus weight."""

    def __init__(self, message: str, weight: Tuple[int, ...]) -> None:
        super().__init__(message)
        self.weight = weight


@dataclass(frozen=True)
class NuSeries:
    """``Σ_{k<=order} nu^k coeffs[k]`` with polynomial coefficients."""

    ring: PolyRing
    order: int
    coeffs: Tuple[Poly, ...] = ()

    def __post_init__(self) -> None:
        if self.order < 0:
            raise ValidationError("打ち切り次数 N は 0 以上で指定してください。")
        padded = [self.ring(c) for c in self.coeffs[: self.order + 1]]
        padded += [self.ring.zero] * (self.order + 1 - len(padded))
        object.__setattr__(self, "coeffs", tuple(padded))

    @classmethod
    def constant(cls, poly: Poly, order: int) -> "NuSeries":
        return cls(poly.ring, order, (poly,))

    @classmethod
    def zero(cls, ring: PolyRing, order: int) -> "NuSeries":
        return cls(ring, order)

    def __getitem__(self, k: int) -> Poly:
        return self.coeffs[k] if 0 <= k <= self.order else self.ring.zero

    def __iter__(self) -> Iterator[Poly]:
        return iter(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: "NuSeries") -> None:
        if other.order != self.order or other.ring != self.ring:
            raise ValidationError("打ち切り次数または多項式環が一致しない級数です。")

    def __add__(self, other: "NuSeries") -> "NuSeries":
        self._check(other)
        return NuSeries(self.ring, self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "NuSeries":
        return NuSeries(self.ring, self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "NuSeries") -> "NuSeries":
        return self + (-other)

    def times_poly(self, poly: Poly) -> "NuSeries":
        """Pointwise (undeformed) product with a polynomial."""

        return NuSeries(self.ring, self.order, tuple(c * poly for c in self.coeffs))

    def map(self, fn) -> "NuSeries":
        return NuSeries(self.ring, self.order, tuple(fn(c) for c in self.coeffs))


@dataclass(frozen=True)
class DeformedChain:
    """Koszul chain with ``NuSeries`` coefficients."""

    ring: PolyRing
    order: int
    degree: int
    terms: Mapping[Subset, NuSeries] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned = {tuple(s): c for s, c in self.terms.items() if not c.is_zero()}
        object.__setattr__(self, "terms", dict(sorted(cleaned.items())))

    @classmethod
    def from_chain(cls, chain: KoszulChain, order: int) -> "DeformedChain":
        return cls(
            chain.ring,
            order,
            chain.degree,
            {s: NuSeries.constant(c, order) for s, c in chain},
        )

    def __getitem__(self, subset: Subset) -> NuSeries:
        return self.terms.get(tuple(subset), NuSeries.zero(self.ring, self.order))

    def is_zero(self) -> bool:
        return not self.terms


def _wick_terms(f: Poly, g: Poly, max_order: int) -> List[Dict[Tuple[int, ...], object]]:
    n = f.ring.ngens // 2
    orders: List[Dict[Tuple[int, ...], object]] = [{} for _ in range(max_order + 1)]
    for m1, c1 in f.items():
        a1, b1 = split_monomial(m1)
        for m2, c2 in g.items():
            a2, b2 = split_monomial(m2)
            ranges = [range(min(a1[j], b2[j]) + 1) for j in range(n)]
            for gamma in itertools.product(*ranges):
                k = sum(gamma)
                if k > max_order:
                    continue
                num, den = 1, 1
                for j, c in enumerate(gamma):
                    num *= perm(a1[j], c) * perm(b2[j], c)
                    den *= factorial(c)
                monom = tuple(a1[j] - gamma[j] + a2[j] for j in range(n)) + tuple(
                    b1[j] + b2[j] - gamma[j] for j in range(n)
                )
                bucket = orders[k]
                bucket[monom] = bucket.get(monom, QQ.zero) + c1 * c2 * QQ(num, den)
    return orders


def wick(f: NuSeries, g: NuSeries, order: Optional[int] = None) -> NuSeries:
    """Wick product of two series, truncated after ``nu^order``."""

    f._check(g)
    order = f.order if order is None else order
    ring = f.ring
    coeffs = [ring.zero] * (order + 1)
    for a in range(order + 1):
        if not f[a]:
            continue
        for b in range(order + 1 - a):
            if not g[b]:
                continue
            for c, bucket in enumerate(_wick_terms(f[a], g[b], order - a - b)):
                if bucket:
                    coeffs[a + b + c] += ring.from_dict(bucket)
    return NuSeries(ring, order, tuple(coeffs))


def star(f: Poly, g: Poly, order: int = DEFAULT_ORDER) -> NuSeries:
    """Wick product of two plain polynomials."""

    return wick(NuSeries.constant(f, order), NuSeries.constant(g, order), order)


def poisson(f: Poly, g: Poly) -> Poly:
    ring = f.ring
    result = ring.zero
    for j in range(ring.ngens // 2):
        zj, zbj = z(ring, j), zbar(ring, j)
        result += f.diff(zj) * g.diff(zbj) - f.diff(zbj) * g.diff(zj)
    return result


def qkos(chain: DeformedChain, J: MomentMap) -> DeformedChain:
    """``Σ_i R_{J_i} ι(e^i)``: contraction, then right Wick multiplication by ``J_i``."""

    if chain.degree == 0:
        raise ValidationError("次数 0 の鎖に qkos は定義されません。")
    components = [NuSeries.constant(c, chain.order) for c in J.components]
    result: Dict[Subset, NuSeries] = {}
    zero = NuSeries.zero(chain.ring, chain.order)
    for subset, coeff in chain.terms.items():
        for p, i in enumerate(subset):
            target = subset[:p] + subset[p + 1:]
            term = wick(coeff, components[i])
            if p % 2:
                term = -term
            result[target] = result.get(target, zero) + term
    return DeformedChain(chain.ring, chain.order, chain.degree - 1, result)


def _h0(series: NuSeries, split: Splitting) -> DeformedChain:
    ell = len(split.gb.generators)
    coeffs: Dict[Subset, List[Poly]] = {(i,): [] for i in range(ell)}
    for c in series:
        witness = split.h0(c)
        for i in range(ell):
            coeffs[(i,)].append(witness[(i,)])
    return DeformedChain(
        series.ring,
        series.order,
        1,
        {s: NuSeries(series.ring, series.order, tuple(cs)) for s, cs in coeffs.items()},
    )


def _deformation_step(series: NuSeries, split: Splitting) -> NuSeries:
    # T = (qkos_1 - ∂_1) h0; raises the nu-order by at least one.
    chain = _h0(series, split)
    result = NuSeries.zero(series.ring, series.order)
    for (i,), coeff in chain.terms.items():
        component = split.moment.components[i]
        result += wick(coeff, NuSeries.constant(component, series.order)) - coeff.times_poly(component)
    return result


def qres(series: NuSeries, split: Splitting) -> NuSeries:
    """Deformed restriction ``res(id + T)^(-1)`` summed as a finite nu-adic series."""

    total = series
    term = series
    for _ in range(series.order):
        term = -_deformation_step(term, split)
        if term.is_zero():
            break
        total = total + term
    return total.map(split.res)


def _require_invariant_normal_form(series: NuSeries, split: Splitting, name: str) -> None:
    weights = split.moment.weights
    zero = (0,) * weights.ell
    for k, coeff in enumerate(series):
        for monom in coeff.keys():
            weight = monomial_weight(weights, *split_monomial(monom))
            if weight != zero:
                raise NonInvariantError(
                    f"{name} の nu^{k} 係数に重み {weight} の単項式が含まれています（不変ではありません）。",
                    weight,
                )
        if split.res(coeff) != coeff:
            raise ValidationError(f"{name} の nu^{k} 係数が正規形ではありません。")


def star0(f: NuSeries, g: NuSeries, split: Splitting) -> NuSeries:
    """Reduced product ``qres(prol f ⋆ prol g)`` of invariant normal forms."""

    _require_invariant_normal_form(f, split, "f")
    _require_invariant_normal_form(g, split, "g")
    return qres(wick(f.map(split.prol), g.map(split.prol)), split)


def star0_table(
    invariants: Sequence[Poly], split: Splitting, order: int = DEFAULT_ORDER
) -> Dict[Tuple[int, int], NuSeries]:
    """``f_i *0 f_j`` for all ordered pairs of the given invariants."""

    series = [NuSeries.constant(split.ring(f), order) for f in invariants]
    table: Dict[Tuple[int, int], NuSeries] = {}
    for i, j in itertools.product(range(len(series)), repeat=2):
        table[(i, j)] = star0(series[i], series[j], split)
    logger.info("Reduced product table computed", extra={"entries": len(table), "order": order})
    return table
