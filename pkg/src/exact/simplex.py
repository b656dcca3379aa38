"""Exact two-phase simplex with Bland's rule and checkable certificates."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Set, Tuple

from ..errors import ValidationError
from .linalg import QMatrix, QVector, dot, to_rational

logger = logging.getLogger(__name__)

_ZERO = Fraction(0)
_ONE = Fraction(1)


class MalformedInstanceError(ValidationError):
    """Raised when an LP instance has inconsistent dimensions."""


class Relation(str, Enum):
    EQ = "="
    GE = ">="


class LPStatus(str, Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class CertificateKind(str, Enum):
    FEASIBLE_POINT = "feasible-point"
    INFEASIBILITY_MULTIPLIERS = "infeasibility-multipliers"


@dataclass(frozen=True)
class LPInstance:
    """``matrix·x (relation) rhs``, optionally maximizing ``objective·x``.

    ``lower_bounds[j]`` is None for a free variable; an absent vector means
    every variable is free.
    """

    matrix: QMatrix
    relations: Tuple[Relation, ...]
    rhs: QVector
    objective: Optional[QVector] = None
    lower_bounds: Optional[Tuple[Optional[Fraction], ...]] = None

    def __post_init__(self) -> None:
        m, n = self.matrix.shape
        if len(self.relations) != m or len(self.rhs) != m:
            raise MalformedInstanceError(
                f"制約の本数が一致しません: rows={m}, relations={len(self.relations)}, rhs={len(self.rhs)}"
            )
        if self.objective is not None and len(self.objective) != n:
            raise MalformedInstanceError("目的関数の長さが変数の個数と一致しません。")
        if self.lower_bounds is not None and len(self.lower_bounds) != n:
            raise MalformedInstanceError("下限の個数が変数の個数と一致しません。")

    @classmethod
    def build(
        cls,
        rows: Sequence[Sequence[object]],
        relations: Sequence[object],
        rhs: Sequence[object],
        *,
        num_vars: Optional[int] = None,
        objective: Optional[Sequence[object]] = None,
        lower_bounds: Optional[Sequence[Optional[object]]] = None,
    ) -> "LPInstance":
        try:
            matrix = QMatrix.from_rows(rows, num_vars)
            parsed_relations = tuple(Relation(r) for r in relations)
        except ValueError as exc:
            raise MalformedInstanceError(str(exc)) from exc
        return cls(
            matrix=matrix,
            relations=parsed_relations,
            rhs=tuple(to_rational(b) for b in rhs),
            objective=None if objective is None else tuple(to_rational(c) for c in objective),
            lower_bounds=None
            if lower_bounds is None
            else tuple(None if b is None else to_rational(b) for b in lower_bounds),
        )

    @property
    def num_vars(self) -> int:
        return self.matrix.ncols

    def bound(self, j: int) -> Optional[Fraction]:
        if self.lower_bounds is None:
            return None
        return self.lower_bounds[j]


@dataclass(frozen=True)
class FarkasCertificate:
    """A feasible point (with optional optimality dual or improving ray) or
    infeasibility multipliers, one per constraint row."""

    kind: CertificateKind
    vector: QVector
    dual: Optional[QVector] = None
    ray: Optional[QVector] = None


@dataclass(frozen=True)
class LPSolution:
    status: LPStatus
    certificate: FarkasCertificate
    value: Optional[Fraction] = None

    @property
    def point(self) -> Optional[QVector]:
        if self.certificate.kind is CertificateKind.FEASIBLE_POINT:
            return self.certificate.vector
        return None


class _Tableau:
    """Dense tableau ``T = B^-1 [A' | I]`` with the basic solution in ``rhs``."""

    def __init__(self, rows: List[List[Fraction]], rhs: List[Fraction], basis: List[int]) -> None:
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r: int, c: int) -> None:
        lead = self.rows[r][c]
        self.rows[r] = [x / lead for x in self.rows[r]]
        self.rhs[r] /= lead
        for k, row in enumerate(self.rows):
            if k == r or row[c] == 0:
                continue
            factor = row[c]
            self.rows[k] = [x - factor * y for x, y in zip(row, self.rows[r])]
            self.rhs[k] -= factor * self.rhs[r]
        self.basis[r] = c

    def reduced_cost(self, cost: Sequence[Fraction], column: int) -> Fraction:
        return cost[column] - sum(
            (cost[b] * row[column] for b, row in zip(self.basis, self.rows)), _ZERO
        )

    def run(self, cost: Sequence[Fraction], allowed: Set[int]) -> Optional[int]:
        """Maximize ``cost`` with Bland's rule; return an unbounded column or None."""

        iterations = 0
        while True:
            entering = next(
                (j for j in sorted(allowed) if self.reduced_cost(cost, j) > 0), None
            )
            if entering is None:
                logger.debug("Simplex optimal", extra={"iterations": iterations})
                return None
            leaving: Optional[int] = None
            best: Optional[Fraction] = None
            for k, row in enumerate(self.rows):
                if row[entering] <= 0:
                    continue
                ratio = self.rhs[k] / row[entering]
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and self.basis[k] < self.basis[leaving])  # type: ignore[index]
                ):
                    best, leaving = ratio, k
            if leaving is None:
                return entering
            self.pivot(leaving, entering)
            iterations += 1

    def multipliers(self, cost: Sequence[Fraction], first_artificial: int) -> List[Fraction]:
        """``c_B B^-1``, read from the artificial block which started as identity."""

        m = len(self.rows)
        return [
            sum(
                (cost[b] * row[first_artificial + i] for b, row in zip(self.basis, self.rows)),
                _ZERO,
            )
            for i in range(m)
        ]


def solve_lp(lp: LPInstance) -> LPSolution:
    """Solve exactly; every answer carries a certificate for ``check_certificate``."""

    m, n = lp.matrix.shape

    # Standard form: x_j = l_j + x'_j for bounded variables, x_j = x+ - x- for
    # free ones, one surplus per >= row, then one artificial per row.
    columns: List[Tuple[int, int]] = []
    for j in range(n):
        if lp.bound(j) is None:
            columns.extend([(j, 1), (j, -1)])
        else:
            columns.append((j, 1))
    num_structural = len(columns)
    surplus_of = {}
    for i, relation in enumerate(lp.relations):
        if relation is Relation.GE:
            surplus_of[i] = num_structural + len(surplus_of)
    num_real = num_structural + len(surplus_of)
    width = num_real + m

    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    signs: List[int] = []
    for i, source in enumerate(lp.matrix.rows):
        row = [source[j] * s for j, s in columns] + [_ZERO] * (width - num_structural)
        if i in surplus_of:
            row[surplus_of[i]] = -_ONE
        b = lp.rhs[i] - sum(
            (source[j] * lp.bound(j) for j in range(n) if lp.bound(j) is not None), _ZERO  # type: ignore[operator]
        )
        sign = -1 if b < 0 else 1
        row = [x * sign for x in row]
        row[num_real + i] = _ONE
        rows.append(row)
        rhs.append(b * sign)
        signs.append(sign)

    tableau = _Tableau(rows, rhs, [num_real + i for i in range(m)])
    phase_one = [_ZERO] * num_real + [-_ONE] * m
    tableau.run(phase_one, set(range(width)))
    infeasibility = -sum((tableau.rhs[k] for k, b in enumerate(tableau.basis) if b >= num_real), _ZERO)

    if infeasibility < 0:
        y_std = tableau.multipliers(phase_one, num_real)
        multipliers = tuple(-y * s for y, s in zip(y_std, signs))
        logger.debug("LP infeasible", extra={"rows": m, "vars": n})
        return LPSolution(
            LPStatus.INFEASIBLE,
            FarkasCertificate(CertificateKind.INFEASIBILITY_MULTIPLIERS, multipliers),
        )

    # Drive zero-level artificials out of the basis; rows where that is
    # impossible are redundant and stay inert.
    for k, b in enumerate(list(tableau.basis)):
        if b < num_real:
            continue
        target = next((c for c in range(num_real) if tableau.rows[k][c] != 0), None)
        if target is not None:
            tableau.pivot(k, target)

    def recover(standard: Sequence[Fraction], shift: bool) -> QVector:
        values = [_ZERO] * n
        for column, (j, s) in enumerate(columns):
            values[j] += s * standard[column]
        if shift:
            for j in range(n):
                bound = lp.bound(j)
                if bound is not None:
                    values[j] += bound
        return tuple(values)

    def basic_solution() -> List[Fraction]:
        standard = [_ZERO] * width
        for k, b in enumerate(tableau.basis):
            standard[b] = tableau.rhs[k]
        return standard

    if lp.objective is None:
        point = recover(basic_solution(), shift=True)
        return LPSolution(
            LPStatus.FEASIBLE, FarkasCertificate(CertificateKind.FEASIBLE_POINT, point)
        )

    phase_two = [lp.objective[j] * s for j, s in columns] + [_ZERO] * (width - num_structural)
    unbounded_column = tableau.run(phase_two, set(range(num_real)))
    point = recover(basic_solution(), shift=True)

    if unbounded_column is not None:
        direction = [_ZERO] * width
        direction[unbounded_column] = _ONE
        for k, b in enumerate(tableau.basis):
            direction[b] = -tableau.rows[k][unbounded_column]
        ray = recover(direction, shift=False)
        logger.debug("LP unbounded", extra={"rows": m, "vars": n})
        return LPSolution(
            LPStatus.UNBOUNDED,
            FarkasCertificate(CertificateKind.FEASIBLE_POINT, point, ray=ray),
        )

    y_std = tableau.multipliers(phase_two, num_real)
    dual = tuple(y * s for y, s in zip(y_std, signs))
    value = dot(lp.objective, point)
    return LPSolution(
        LPStatus.FEASIBLE,
        FarkasCertificate(CertificateKind.FEASIBLE_POINT, point, dual=dual),
        value=value,
    )


def _satisfies(lp: LPInstance, vector: Sequence[Fraction], homogeneous: bool) -> bool:
    for row, relation, b in zip(lp.matrix.rows, lp.relations, lp.rhs):
        lhs = dot(row, vector)
        target = _ZERO if homogeneous else b
        if relation is Relation.EQ and lhs != target:
            return False
        if relation is Relation.GE and lhs < target:
            return False
    for j, x in enumerate(vector):
        bound = lp.bound(j)
        if bound is not None and x < (_ZERO if homogeneous else bound):
            return False
    return True


def check_certificate(lp: LPInstance, cert: FarkasCertificate) -> bool:
    """Validate a certificate by exact arithmetic only."""

    m, n = lp.matrix.shape
    columns = [lp.matrix.column(j) for j in range(n)]

    if cert.kind is CertificateKind.INFEASIBILITY_MULTIPLIERS:
        y = cert.vector
        if len(y) != m:
            return False
        if any(r is Relation.GE and yi < 0 for r, yi in zip(lp.relations, y)):
            return False
        margin = dot(y, lp.rhs)
        for j, column in enumerate(columns):
            weight = dot(y, column)
            bound = lp.bound(j)
            if bound is None:
                if weight != 0:
                    return False
            else:
                if weight > 0:
                    return False
                margin -= weight * bound
        return margin > 0

    x = cert.vector
    if len(x) != n or not _satisfies(lp, x, homogeneous=False):
        return False

    if cert.ray is not None:
        if lp.objective is None or len(cert.ray) != n:
            return False
        return _satisfies(lp, cert.ray, homogeneous=True) and dot(lp.objective, cert.ray) > 0

    if cert.dual is not None:
        if lp.objective is None or len(cert.dual) != m:
            return False
        y = cert.dual
        if any(r is Relation.GE and yi > 0 for r, yi in zip(lp.relations, y)):
            return False
        bound_value = dot(y, lp.rhs)
        for j, column in enumerate(columns):
            slack = lp.objective[j] - dot(y, column)
            bound = lp.bound(j)
            if bound is None:
                if slack != 0:
                    return False
            else:
                if slack > 0:
                    return False
                bound_value += slack * bound
        return dot(lp.objective, x) == bound_value

    return True
