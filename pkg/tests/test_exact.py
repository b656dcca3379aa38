from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest
import sympy

from src.errors import ValidationError
from src.exact import (
    CertificateKind,
    FarkasCertificate,
    LPInstance,
    LPStatus,
    MalformedInstanceError,
    QMatrix,
    check_certificate,
    format_rational,
    hnf,
    solve_lp,
    to_rational,
)


def test_to_rational_accepts_exact_inputs() -> None:
    assert to_rational("3/4") == Fraction(3, 4)
    assert to_rational(" -2 ") == Fraction(-2)
    assert to_rational(5) == Fraction(5)
    assert to_rational(Fraction(1, 3)) == Fraction(1, 3)


@pytest.mark.parametrize("value", [1.5, True, "1/0", "abc", None])
def test_to_rational_rejects_inexact_or_malformed(value: object) -> None:
    with pytest.raises(ValidationError):
        to_rational(value)


def test_format_rational() -> None:
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(-3)) == "-3"


def test_rank_matches_sympy(rng) -> None:
    for _ in range(40):
        rows = [[rng.randint(-3, 3) for _ in range(rng.randint(1, 5))]]
        width = len(rows[0])
        rows += [[rng.randint(-3, 3) for _ in range(width)] for _ in range(rng.randint(0, 4))]
        assert QMatrix.from_rows(rows).rank() == sympy.Matrix(rows).rank()


def test_nullspace_vectors_are_in_kernel() -> None:
    matrix = QMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, -1]])
    basis = matrix.nullspace()
    assert len(basis) == 3 - matrix.rank()
    for vector in basis:
        assert all(x == 0 for x in matrix.apply(vector))


def test_solve_consistent_and_inconsistent() -> None:
    matrix = QMatrix.from_rows([[1, 1], [1, -1]])
    assert matrix.solve([2, 0]) == (Fraction(1), Fraction(1))
    singular = QMatrix.from_rows([[1, 1], [2, 2]])
    assert singular.solve([1, 3]) is None


def test_row_space_contains() -> None:
    base = QMatrix.from_rows([[1, -1, 0]])
    assert base.row_space_contains(QMatrix.from_rows([[2, -2, 0]]))
    assert not base.row_space_contains(QMatrix.from_rows([[1, 0, 0]]))


def test_hnf_fixed_example() -> None:
    form = hnf([[2, 4], [1, 2]])
    assert form.h == ((1, 2), (0, 0))
    assert form.rank == 1
    u = sympy.Matrix([list(r) for r in form.u])
    assert abs(u.det()) == 1
    assert u * sympy.Matrix([[2, 4], [1, 2]]) == sympy.Matrix([[1, 2], [0, 0]])


def test_hnf_combines_rows_by_extended_gcd() -> None:
    form = hnf([[-4, 6], [6, -3]])
    assert form.h == ((2, 3), (0, 12))
    assert form.rank == 2
    u = sympy.Matrix([list(r) for r in form.u])
    assert abs(u.det()) == 1
    assert u * sympy.Matrix([[-4, 6], [6, -3]]) == sympy.Matrix([[2, 3], [0, 12]])


def test_hnf_properties(rng) -> None:
    for _ in range(30):
        ell, n = rng.randint(1, 3), rng.randint(1, 5)
        rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(ell)]
        form = hnf(rows)
        u = sympy.Matrix([list(r) for r in form.u])
        assert abs(u.det()) == 1
        assert u * sympy.Matrix(rows) == sympy.Matrix([list(r) for r in form.h])
        assert form.rank == sympy.Matrix(rows).rank()
        last_pivot = -1
        for row in form.h[: form.rank]:
            pivot = next(j for j, x in enumerate(row) if x)
            assert pivot > last_pivot and row[pivot] > 0
            last_pivot = pivot
        assert all(all(x == 0 for x in row) for row in form.h[form.rank:])


def _beale() -> LPInstance:
    # Classic cycling example; Bland's rule must terminate.
    return LPInstance.build(
        [
            ["-1/4", 60, "1/25", -9],
            ["-1/2", 90, "1/50", -3],
            [0, 0, -1, 0],
        ],
        [">=", ">=", ">="],
        [0, 0, -1],
        objective=["3/4", -150, "1/50", -6],
        lower_bounds=[0, 0, 0, 0],
    )


def test_beale_cycling_instance_reaches_optimum() -> None:
    lp = _beale()
    solution = solve_lp(lp)
    assert solution.status is LPStatus.FEASIBLE
    assert solution.value == Fraction(1, 20)
    assert solution.certificate.dual is not None
    assert check_certificate(lp, solution.certificate)


def test_infeasible_instance_has_farkas_multipliers() -> None:
    lp = LPInstance.build([[1, 1]], ["="], [-1], lower_bounds=[0, 0])
    solution = solve_lp(lp)
    assert solution.status is LPStatus.INFEASIBLE
    assert solution.certificate.kind is CertificateKind.INFEASIBILITY_MULTIPLIERS
    assert check_certificate(lp, solution.certificate)


def test_unbounded_instance_has_improving_ray() -> None:
    lp = LPInstance.build([[1, -1]], ["="], [0], objective=[1, 0], lower_bounds=[0, 0])
    solution = solve_lp(lp)
    assert solution.status is LPStatus.UNBOUNDED
    assert solution.certificate.ray is not None
    assert check_certificate(lp, solution.certificate)


def test_free_variables_and_equalities() -> None:
    lp = LPInstance.build([[1, 1], [1, -1]], ["=", "="], [3, 1])
    solution = solve_lp(lp)
    assert solution.point == (Fraction(2), Fraction(1))
    assert check_certificate(lp, solution.certificate)


def test_tampered_certificates_are_rejected() -> None:
    lp = LPInstance.build([[1, 1]], ["="], [-1], lower_bounds=[0, 0])
    good = solve_lp(lp).certificate
    assert not check_certificate(lp, replace(good, vector=tuple(-y for y in good.vector)))
    bogus_point = FarkasCertificate(CertificateKind.FEASIBLE_POINT, (Fraction(0), Fraction(0)))
    assert not check_certificate(lp, bogus_point)

    beale = _beale()
    optimal = solve_lp(beale).certificate
    assert optimal.dual is not None
    shifted = tuple(y - 1 for y in optimal.dual)
    assert not check_certificate(beale, replace(optimal, dual=shifted))


def test_malformed_instance_is_rejected() -> None:
    with pytest.raises(MalformedInstanceError):
        LPInstance.build([[1, 2]], ["="], [1, 2])
    with pytest.raises(MalformedInstanceError):
        LPInstance.build([[1, 2]], ["<="], [1])
    with pytest.raises(MalformedInstanceError):
        LPInstance.build([[1, 2]], ["="], [1], objective=[1])


def test_random_instances_always_certified(rng) -> None:
    for _ in range(500):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        relations = [rng.choice(["=", ">="]) for _ in range(m)]
        rhs = [rng.randint(-3, 3) for _ in range(m)]
        bounds = [rng.choice([None, 0, 1, -1]) for _ in range(n)]
        objective = [rng.randint(-2, 2) for _ in range(n)] if rng.random() < 0.5 else None
        lp = LPInstance.build(rows, relations, rhs, objective=objective, lower_bounds=bounds)
        solution = solve_lp(lp)
        assert check_certificate(lp, solution.certificate)
