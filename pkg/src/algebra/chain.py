"""Sparse chains of the Koszul complex ``Λ^k g ⊗ K[z, zb]``."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, Mapping, Tuple

from sympy.polys.rings import PolyRing

from ..errors import ValidationError
from .ring import Poly

Subset = Tuple[int, ...]


@dataclass(frozen=True)
class KoszulChain:
    """``Σ_S e_S ⊗ f_S`` over sorted 0-based subsets ``S`` of size ``degree``."""

    ring: PolyRing
    degree: int
    terms: Mapping[Subset, Poly] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise ValidationError("Koszul 鎖の次数は 0 以上です。")
        cleaned: Dict[Subset, Poly] = {}
        for subset, coeff in self.terms.items():
            key = tuple(subset)
            if len(key) != self.degree or list(key) != sorted(set(key)):
                raise ValidationError(f"添字集合 {key} は次数 {self.degree} の昇順集合ではありません。")
            if coeff:
                cleaned[key] = self.ring(coeff)
        object.__setattr__(self, "terms", dict(sorted(cleaned.items())))

    @classmethod
    def zero(cls, ring: PolyRing, degree: int) -> "KoszulChain":
        return cls(ring, degree, {})

    @classmethod
    def basis(cls, ring: PolyRing, subset: Subset, coeff: Poly | None = None) -> "KoszulChain":
        subset = tuple(sorted(subset))
        return cls(ring, len(subset), {subset: ring.one if coeff is None else coeff})

    def __iter__(self) -> Iterator[Tuple[Subset, Poly]]:
        return iter(self.terms.items())

    def __getitem__(self, subset: Subset) -> Poly:
        return self.terms.get(tuple(subset), self.ring.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "KoszulChain") -> "KoszulChain":
        if other.degree != self.degree:
            raise ValidationError("次数の異なる Koszul 鎖は足せません。")
        merged: Dict[Subset, Poly] = dict(self.terms)
        for subset, coeff in other.terms.items():
            merged[subset] = merged.get(subset, self.ring.zero) + coeff
        return KoszulChain(self.ring, self.degree, merged)

    def __neg__(self) -> "KoszulChain":
        return KoszulChain(self.ring, self.degree, {s: -c for s, c in self.terms.items()})

    def __sub__(self, other: "KoszulChain") -> "KoszulChain":
        return self + (-other)

    def as_poly(self) -> Poly:
        """The ``K_0`` value of a degree-0 chain."""

        if self.degree != 0:
            raise ValidationError("次数 0 の鎖だけが多項式として読めます。")
        return self[()]
