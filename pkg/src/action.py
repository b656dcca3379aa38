"""Weight matrices of linear torus actions and their quadratic moment maps."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import List, NamedTuple, Optional, Sequence, Set, Tuple

from .algebra.ring import Monomial, Poly, phase_ring, split_monomial, to_qq, z, zbar
from .errors import ValidationError
from .exact import QMatrix, hnf, to_rational

logger = logging.getLogger(__name__)

Weight = Tuple[int, ...]


class DimensionError(ValidationError):
    """Raised when vector lengths do not match the weight matrix."""


@dataclass(frozen=True)
class WeightMatrix:
    """Integer ``ell x n`` matrix; column j is the character on ``z_j``."""

    entries: Tuple[Tuple[int, ...], ...]
    n: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], n: Optional[int] = None) -> "WeightMatrix":
        data: List[Tuple[int, ...]] = []
        for row in rows:
            values = []
            for x in row:
                if isinstance(x, bool) or not isinstance(x, int):
                    raise ValidationError(f"重み行列の成分は整数で指定してください: {x!r}")
                values.append(x)
            data.append(tuple(values))
        if not data and n is None:
            raise ValidationError("重み行列が空です。")
        width = len(data[0]) if data else n
        if width is None or width < 1:
            raise ValidationError("重み行列の列数は 1 以上が必要です。")
        if any(len(row) != width for row in data):
            raise ValidationError("重み行列の行の長さが揃っていません。")
        return cls(tuple(data), width)

    @property
    def ell(self) -> int:
        return len(self.entries)

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> List[Tuple[int, ...]]:
        return [self.column(j) for j in range(self.n)]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def to_qmatrix(self) -> QMatrix:
        return QMatrix.from_rows(self.entries, self.n)

    def submatrix(self, columns: Sequence[int]) -> "WeightMatrix":
        return WeightMatrix(tuple(tuple(row[j] for j in columns) for row in self.entries), len(columns))

    def tolist(self) -> List[List[int]]:
        return [list(row) for row in self.entries]


class Normalization(NamedTuple):
    effective: WeightMatrix
    basis_change: Tuple[Tuple[int, ...], ...]
    was_effective: bool


def normalize(weights: WeightMatrix) -> Normalization:
    """Divide out the subtorus acting trivially via the row Hermite form."""

    form = hnf(weights.entries)
    effective = WeightMatrix(form.h[: form.rank], weights.n)
    was_effective = form.rank == weights.ell
    if not was_effective:
        logger.warning(
            "Weight matrix is not effective; a %d-dimensional subtorus acts trivially",
            weights.ell - form.rank,
            extra={"rank": form.rank, "ell": weights.ell},
        )
    return Normalization(effective, form.u, was_effective)


def cross_polytope(ell: int) -> WeightMatrix:
    """Weight matrix whose columns are ``e_1, -e_1, ..., e_ell, -e_ell``."""

    if ell < 1:
        raise ValidationError("ell は 1 以上で指定してください。")
    rows = []
    for i in range(ell):
        row = [0] * (2 * ell)
        row[2 * i], row[2 * i + 1] = 1, -1
        rows.append(row)
    return WeightMatrix.from_rows(rows)


def replicate(weights: WeightMatrix, m: int) -> WeightMatrix:
    """The m-particle system ``(A|A|...|A)``."""

    if m < 1:
        raise ValidationError("粒子数 m は 1 以上で指定してください。")
    return WeightMatrix(tuple(row * m for row in weights.entries), weights.n * m)


def monomial_weight(weights: WeightMatrix, alpha: Sequence[int], beta: Sequence[int]) -> Weight:
    """Torus weight ``A·(beta - alpha)`` of ``z^alpha zb^beta``."""

    if len(alpha) != weights.n or len(beta) != weights.n:
        raise DimensionError("指数ベクトルの長さが n と一致しません。")
    if any(x < 0 for x in alpha) or any(x < 0 for x in beta):
        raise ValidationError("指数は非負整数で指定してください。")
    return tuple(
        sum(a * (b - c) for a, b, c in zip(row, beta, alpha)) for row in weights.entries
    )


def poly_weights(weights: WeightMatrix, f: Poly) -> Set[Weight]:
    return {monomial_weight(weights, *split_monomial(m)) for m in f.keys()}


def is_invariant(weights: WeightMatrix, f: Poly) -> bool:
    zero = (0,) * weights.ell
    return all(w == zero for w in poly_weights(weights, f))


def list_invariant_monomials(weights: WeightMatrix, maxdeg: int) -> List[Tuple[Monomial, Monomial]]:
    """All invariant ``(alpha, beta)`` of total degree at most ``maxdeg``.

    Ordered by degree, then by the index tuples of the variables involved.
    """

    if maxdeg < 0:
        raise ValidationError("maxdeg は 0 以上で指定してください。")
    n = weights.n
    zero = (0,) * weights.ell
    found: List[Tuple[Monomial, Monomial]] = []
    for degree in range(maxdeg + 1):
        for indices in itertools.combinations_with_replacement(range(2 * n), degree):
            exponents = [0] * (2 * n)
            for k in indices:
                exponents[k] += 1
            alpha, beta = tuple(exponents[:n]), tuple(exponents[n:])
            if monomial_weight(weights, alpha, beta) == zero:
                found.append((alpha, beta))
    return found


@dataclass(frozen=True)
class MomentMap:
    """``J_i = sum_j a_ij z_j zb_j - mu_i``."""

    weights: WeightMatrix
    shift: Tuple[Fraction, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.shift:
            object.__setattr__(self, "shift", (Fraction(0),) * self.weights.ell)
        if len(self.shift) != self.weights.ell:
            raise DimensionError(
                f"mu の長さ {len(self.shift)} が ell={self.weights.ell} と一致しません。"
            )

    @property
    def ring(self):
        return phase_ring(self.weights.n)

    @property
    def is_homogeneous(self) -> bool:
        return all(x == 0 for x in self.shift)

    @cached_property
    def components(self) -> Tuple[Poly, ...]:
        ring = self.ring
        result = []
        for row, mu in zip(self.weights.entries, self.shift):
            component = ring.zero
            for j, a in enumerate(row):
                if a:
                    component += z(ring, j) * zbar(ring, j) * a
            result.append(component - to_qq(mu))
        return tuple(result)


def moment_map(weights: WeightMatrix, mu: Optional[Sequence[object]] = None) -> MomentMap:
    shift = tuple(to_rational(x) for x in mu) if mu is not None else ()
    if mu is not None and len(shift) != weights.ell:
        raise DimensionError(f"mu の長さ {len(shift)} が ell={weights.ell} と一致しません。")
    return MomentMap(weights, shift)
