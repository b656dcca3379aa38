"""Diffeomorphism type of the link ``X_A = Z ∩ S^(2n-1)`` for admissible A, ell <= 2."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cmp_to_key
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .action import WeightMatrix
from .convex import AdmissibilityReport, DEFAULT_SUBSET_BUDGET, check_admissible
from .errors import RefusedError, ValidationError

logger = logging.getLogger(__name__)

Direction = Tuple[int, int]


class NotAdmissibleError(RefusedError):
    def __init__(self, message: str, report: Optional[AdmissibilityReport] = None) -> None:
        super().__init__(message)
        self.report = report


class UnsupportedRankError(RefusedError):
    pass


class LinkKind(str, Enum):
    TWO_SPHERES = "product-of-two-spheres"
    THREE_SPHERES = "product-of-three-spheres"
    CONNECTED_SUM = "connected-sum"
    UNSUPPORTED = "unsupported"


@dataclass(frozen=True)
class LinkType:
    """``factors`` lists sphere dimensions per summand (one summand for products)."""

    kind: LinkKind
    factors: Tuple[Tuple[int, ...], ...] = ()

    @property
    def text(self) -> str:
        if self.kind is LinkKind.UNSUPPORTED:
            return "unsupported"
        return " # ".join(" x ".join(f"S^{d}" for d in summand) for summand in self.factors)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class OddGon:
    multiplicities: Tuple[int, ...]
    directions: Tuple[Tuple[Direction, ...], ...] = ()

    def __post_init__(self) -> None:
        size = len(self.multiplicities)
        if size < 3 or size % 2 == 0 or any(m < 1 for m in self.multiplicities):
            raise ValidationError(f"奇数角形の重複度 {self.multiplicities} が不正です。")

    @property
    def k(self) -> int:
        return (len(self.multiplicities) - 1) // 2

    @property
    def n(self) -> int:
        return sum(self.multiplicities)


def _require_admissible(weights: WeightMatrix, budget: int) -> None:
    report = check_admissible(weights, budget)
    if report.admissible:
        return
    if report.violating_subset is not None:
        columns = ", ".join(str(j + 1) for j in report.violating_subset)
        reason = f"列 {{{columns}}} の凸包が原点を含みます"
    else:
        reason = "原点が conv(A) の相対内部にありません"
    raise NotAdmissibleError(f"重み行列が admissible ではありません: {reason}。", report)


def classify_l1(weights: WeightMatrix, budget: int = DEFAULT_SUBSET_BUDGET) -> LinkType:
    """``S^(2n+ - 1) x S^(2n- - 1)`` from the sign counts of a single row."""

    if weights.ell != 1:
        raise UnsupportedRankError(f"classify_l1 は ell=1 専用です（ell={weights.ell}）。")
    _require_admissible(weights, budget)
    row = weights.entries[0]
    positive = sum(1 for a in row if a > 0)
    negative = sum(1 for a in row if a < 0)
    return LinkType(LinkKind.TWO_SPHERES, ((2 * positive - 1, 2 * negative - 1),))


def primitive(vector: Sequence[int]) -> Direction:
    x, y = vector
    g = gcd(x, y)
    return (x // g, y // g)


def _half(v: Direction) -> int:
    x, y = v
    return 0 if y > 0 or (y == 0 and x > 0) else 1


def _angle_cmp(u: Direction, v: Direction) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    cross = u[0] * v[1] - u[1] * v[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def sort_by_angle(directions: Sequence[Direction]) -> List[Direction]:
    """Counter-clockwise order by polar angle in ``[0, 2π)``, exactly."""

    return sorted(directions, key=cmp_to_key(_angle_cmp))


def oddgon_reduce(weights: WeightMatrix, budget: int = DEFAULT_SUBSET_BUDGET) -> OddGon:
    """Merge adjacent direction classes while no antipode separates them.

    The fixed point is the set of maximal runs of configuration directions in
    the circular order of ``D ∪ -D`` that contain no antipode, so it does not
    depend on the order of merges. The word starts at the class holding the
    direction of least polar angle and runs counter-clockwise.
    """

    if weights.ell != 2:
        raise UnsupportedRankError(f"奇数角形への簡約は ell=2 専用です（ell={weights.ell}）。")
    _require_admissible(weights, budget)

    counts: Dict[Direction, int] = {}
    for column in weights.columns():
        d = primitive(column)
        counts[d] = counts.get(d, 0) + 1
    directions = sort_by_angle(list(counts))
    antipodes = {(-x, -y) for x, y in directions}

    circle = sort_by_angle(list(set(directions) | antipodes))
    # Rotate so the circle starts at an antipode; runs are then contiguous.
    start = next(i for i, d in enumerate(circle) if d in antipodes and d not in counts)
    circle = circle[start:] + circle[:start]

    runs: List[List[Direction]] = []
    current: List[Direction] = []
    for d in circle:
        if d in counts:
            current.append(d)
        elif current:
            runs.append(current)
            current = []
    if current:
        runs.append(current)

    first = next(i for i, run in enumerate(runs) if directions[0] in run)
    runs = runs[first:] + runs[:first]
    runs = [sort_by_angle(run) for run in runs]
    gon = OddGon(
        tuple(sum(counts[d] for d in run) for run in runs),
        tuple(tuple(run) for run in runs),
    )
    logger.debug(
        "Odd-gon reduction",
        extra={"classes": len(directions), "multiplicities": gon.multiplicities},
    )
    return gon


def link_of_oddgon(gon: OddGon) -> LinkType:
    if gon.k == 1:
        return LinkType(LinkKind.THREE_SPHERES, (tuple(2 * m - 1 for m in gon.multiplicities),))
    size, n = len(gon.multiplicities), gon.n
    summands = []
    depths = []
    for i in range(size):
        d = sum(gon.multiplicities[(i + t) % size] for t in range(gon.k))
        depths.append(d)
        summands.append((2 * d - 1, 2 * n - 2 * d - 2))
    assert sum(depths) == gon.k * n
    assert all(a >= 1 for a, _ in summands)
    return LinkType(LinkKind.CONNECTED_SUM, tuple(summands))


def classify_l2(weights: WeightMatrix, budget: int = DEFAULT_SUBSET_BUDGET) -> LinkType:
    if weights.ell != 2:
        raise UnsupportedRankError(f"classify_l2 は ell=2 専用です（ell={weights.ell}）。")
    return link_of_oddgon(oddgon_reduce(weights, budget))


def classify(weights: WeightMatrix, budget: int = DEFAULT_SUBSET_BUDGET) -> LinkType:
    if weights.ell == 1:
        return classify_l1(weights, budget)
    if weights.ell == 2:
        return classify_l2(weights, budget)
    logger.warning("Classification unsupported", extra={"ell": weights.ell})
    return LinkType(LinkKind.UNSUPPORTED)


@dataclass(frozen=True)
class StrataPoset:
    """Face lattice of the simplex ``Δ^(ell-1)``; faces are 1-based vertex sets."""

    ell: int
    faces: Tuple[Tuple[int, ...], ...]
    annotations: Dict[Tuple[int, ...], str] = field(default_factory=dict)
    note: Optional[str] = None

    def leq(self, a: Sequence[int], b: Sequence[int]) -> bool:
        return set(a) <= set(b)

    def rank(self, face: Sequence[int]) -> int:
        return len(face) - 1

    @property
    def atoms(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(f for f in self.faces if len(f) == 1)

    def covers(self) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        return [
            (a, b)
            for a in self.faces
            for b in self.faces
            if len(b) == len(a) + 1 and self.leq(a, b)
        ]


def cross_polytope_strata(ell: int) -> StrataPoset:
    if ell < 2:
        raise ValidationError("ell は 2 以上で指定してください。")
    vertices = range(1, ell + 1)
    faces = tuple(
        face for size in range(1, ell + 1) for face in itertools.combinations(vertices, size)
    )
    annotations: Dict[Tuple[int, ...], str] = {}
    note = None
    if ell == 2:
        annotations = {(1,): "S^1", (2,): "S^1", (1, 2): "S^1 x S^1 x (0,1)"}
        note = "Y_{A_2} is homeomorphic to a 3-sphere with an embedded Hopf link"
    return StrataPoset(ell, faces, annotations, note)
