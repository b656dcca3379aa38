"""Certified decisions of the convex conditions on a weight matrix.

Every verdict keeps the LP instances it was decided by together with the
solver's certificates, so a third party can re-check them by arithmetic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple

from .action import DimensionError, WeightMatrix
from .errors import RefusedError
from .exact import LPInstance, LPSolution, LPStatus, check_certificate, solve_lp, to_rational
from .exact.linalg import QVector

logger = logging.getLogger(__name__)

DEFAULT_SUBSET_BUDGET = 10**6


class BudgetExceededError(RefusedError):
    """Raised when subset enumeration would exceed the configured budget."""


@dataclass(frozen=True)
class Evidence:
    label: str
    lp: LPInstance
    solution: LPSolution

    def is_valid(self) -> bool:
        return check_certificate(self.lp, self.solution.certificate)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    evidence: Tuple[Evidence, ...] = ()
    optimum: Optional[Fraction] = None
    witness: Optional[QVector] = None
    note: Optional[str] = None

    def certificates_valid(self) -> bool:
        return all(e.is_valid() for e in self.evidence)


@dataclass(frozen=True)
class ConditionReport:
    sign_change: Verdict
    image_subspace: Verdict
    zero_relint: Verdict

    @property
    def agree(self) -> bool:
        return self.sign_change.holds == self.image_subspace.holds == self.zero_relint.holds


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    violating_subset: Optional[Tuple[int, ...]]
    relint: Verdict
    subsets_checked: int
    evidence: Tuple[Evidence, ...] = ()

    @property
    def relint_holds(self) -> bool:
        return self.relint.holds


def check_sign_change(weights: WeightMatrix) -> Verdict:
    """No ``v`` with ``v^T A >= 0`` and ``v^T A != 0``.

    For quadratic ``J_xi`` vanishing near a point means vanishing identically,
    so this global criterion is the pointwise one quantified over all of Z.
    """

    if weights.is_zero():
        logger.warning("Zero weight matrix: sign change holds vacuously")
        return Verdict(True, note="zero weight matrix: vacuously true")

    columns = weights.columns()
    rows = [list(col) for col in columns]
    rows.append([sum(col[i] for col in columns) for i in range(weights.ell)])
    lp = LPInstance.build(rows, [">="] * len(rows), [0] * weights.n + [1], num_vars=weights.ell)
    solution = solve_lp(lp)
    evidence = (Evidence("v^T A >= 0, sum(v^T A) >= 1", lp, solution),)
    if solution.status is LPStatus.FEASIBLE:
        return Verdict(False, evidence, witness=solution.point)
    return Verdict(True, evidence)


def check_image_subspace(weights: WeightMatrix) -> Verdict:
    """The cone ``A(R_+^n)`` contains ``-a_j`` for every column, hence equals im A."""

    evidence: List[Evidence] = []
    for j, column in enumerate(weights.columns()):
        lp = LPInstance.build(
            weights.entries,
            ["="] * weights.ell,
            [-a for a in column],
            num_vars=weights.n,
            lower_bounds=[0] * weights.n,
        )
        solution = solve_lp(lp)
        evidence.append(Evidence(f"A x = -a_{j + 1}, x >= 0", lp, solution))
        if solution.status is LPStatus.INFEASIBLE:
            return Verdict(False, tuple(evidence), note=f"-a_{j + 1} is not in the cone")
    return Verdict(True, tuple(evidence))


def _relint_lp(weights: WeightMatrix, target: Sequence[Fraction], normalized: bool) -> LPInstance:
    # Variables (lambda_1..lambda_n, t); maximize t.
    n = weights.n
    rows: List[List[int]] = [list(row) + [0] for row in weights.entries]
    relations = ["="] * weights.ell
    rhs: List[object] = list(target)
    if normalized:
        rows.append([1] * n + [0])
        relations.append("=")
        rhs.append(1)
    for j in range(n):
        row = [0] * (n + 1)
        row[j], row[n] = 1, -1
        rows.append(row)
        relations.append(">=")
        rhs.append(0)
    rows.append([0] * n + [-1])
    relations.append(">=")
    rhs.append(-1)
    bounds: List[Optional[int]] = [None] * n + [None if normalized else 0]
    return LPInstance.build(
        rows, relations, rhs, num_vars=n + 1, objective=[0] * n + [1], lower_bounds=bounds
    )


def _relint_verdict(label: str, lp: LPInstance, n: int) -> Verdict:
    solution = solve_lp(lp)
    evidence = (Evidence(label, lp, solution),)
    if solution.status is not LPStatus.FEASIBLE:
        return Verdict(False, evidence, note="no representation at all")
    assert solution.point is not None and solution.value is not None
    return Verdict(solution.value > 0, evidence, optimum=solution.value, witness=solution.point[:n])


def check_zero_relint(weights: WeightMatrix) -> Verdict:
    """0 is a strictly positive convex combination of all columns."""

    lp = _relint_lp(weights, [0] * weights.ell, normalized=True)
    return _relint_verdict("max t: A lambda = 0, sum lambda = 1, lambda >= t", lp, weights.n)


def check_mu_relint(weights: WeightMatrix, mu: Sequence[object]) -> Verdict:
    """mu is a strictly positive combination of the columns (relint of the cone)."""

    target = [to_rational(x) for x in mu]
    if len(target) != weights.ell:
        raise DimensionError(f"mu の長さ {len(target)} が ell={weights.ell} と一致しません。")
    lp = _relint_lp(weights, target, normalized=False)
    return _relint_verdict("max t: A lambda = mu, lambda >= t >= 0", lp, weights.n)


def check_stiemke(weights: WeightMatrix) -> Verdict:
    """A strictly positive kernel vector exists (``x >= 1``, ``Ax = 0``)."""

    lp = LPInstance.build(
        weights.entries,
        ["="] * weights.ell,
        [0] * weights.ell,
        num_vars=weights.n,
        lower_bounds=[1] * weights.n,
    )
    solution = solve_lp(lp)
    evidence = (Evidence("A x = 0, x >= 1", lp, solution),)
    return Verdict(solution.status is LPStatus.FEASIBLE, evidence, witness=solution.point)


def condition_report(weights: WeightMatrix) -> ConditionReport:
    report = ConditionReport(
        check_sign_change(weights), check_image_subspace(weights), check_zero_relint(weights)
    )
    if not report.agree:
        logger.error(
            "Equivalent convex conditions disagree",
            extra={"weights": weights.tolist()},
        )
    return report


def subset_count(n: int, ell: int) -> int:
    return sum(comb(n, k) for k in range(1, min(n, ell) + 1))


def _lex_subsets(n: int, max_size: int) -> Iterator[Tuple[int, ...]]:
    """Nonempty subsets of ``range(n)`` of size <= max_size in lexicographic order."""

    def extend(prefix: Tuple[int, ...], start: int) -> Iterator[Tuple[int, ...]]:
        for j in range(start, n):
            subset = prefix + (j,)
            yield subset
            if len(subset) < max_size:
                yield from extend(subset, j + 1)

    return extend((), 0)


def zero_in_hull(weights: WeightMatrix, label: str = "0 in conv(A)") -> Verdict:
    """0 is a convex combination of the columns (``lambda >= 0``, ``sum lambda = 1``)."""

    rows = [list(row) for row in weights.entries] + [[1] * weights.n]
    lp = LPInstance.build(
        rows,
        ["="] * (weights.ell + 1),
        [0] * weights.ell + [1],
        num_vars=weights.n,
        lower_bounds=[0] * weights.n,
    )
    solution = solve_lp(lp)
    return Verdict(
        solution.status is LPStatus.FEASIBLE, (Evidence(label, lp, solution),), witness=solution.point
    )


def check_admissible(weights: WeightMatrix, budget: int = DEFAULT_SUBSET_BUDGET) -> AdmissibilityReport:
    """0 in relint conv(A) and no ``<= ell`` columns already contain 0 in their hull.

    ``violating_subset`` holds 0-based column indices of the lexicographically
    least offending subset.
    """

    total = subset_count(weights.n, weights.ell)
    if total > budget:
        logger.warning(
            "Admissibility enumeration refused",
            extra={"subsets": total, "budget": budget},
        )
        raise BudgetExceededError(
            f"部分集合の個数 {total} が上限 {budget} を超えています。--budget を調整してください。"
        )

    relint = check_zero_relint(weights)
    evidence: List[Evidence] = []
    violating: Optional[Tuple[int, ...]] = None
    checked = 0
    for subset in _lex_subsets(weights.n, weights.ell):
        label = "0 in conv(columns " + ",".join(str(j + 1) for j in subset) + ")"
        verdict = zero_in_hull(weights.submatrix(subset), label)
        checked += 1
        evidence.extend(verdict.evidence)
        if verdict.holds:
            violating = subset
            break

    admissible = relint.holds and violating is None
    logger.info(
        "Admissibility decided",
        extra={"admissible": admissible, "subsets_checked": checked},
    )
    return AdmissibilityReport(admissible, violating, relint, checked, tuple(evidence))
