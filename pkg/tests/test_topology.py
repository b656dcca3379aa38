from __future__ import annotations

import pytest

from src.action import WeightMatrix, cross_polytope
from src.errors import ValidationError
from src.topology import (
    LinkKind,
    NotAdmissibleError,
    UnsupportedRankError,
    classify,
    classify_l1,
    classify_l2,
    cross_polytope_strata,
    oddgon_reduce,
)

TRIANGLE = [[1, 0, -1], [0, 1, -1]]
PENTAGON = [[1, 0, -1, -1, 1], [0, 1, 1, -1, -2]]


def _wm(rows):
    return WeightMatrix.from_rows(rows)


def _rotations(word):
    return {tuple(word[i:] + word[:i]) for i in range(len(word))}


@pytest.mark.parametrize(
    "row, expected",
    [
        ([1, -1], "S^1 x S^1"),
        ([1, 1, -1], "S^3 x S^1"),
        ([2, 3, -1, -5], "S^3 x S^3"),
    ],
)
def test_classify_single_row(row, expected) -> None:
    assert classify_l1(_wm([row])).text == expected


def test_classify_single_row_depends_on_signs_only(rng) -> None:
    for _ in range(20):
        row = [rng.choice([-1, 1]) * rng.randint(1, 5) for _ in range(rng.randint(2, 6))]
        if all(x > 0 for x in row) or all(x < 0 for x in row):
            continue
        signs = [1 if x > 0 else -1 for x in row]
        assert classify_l1(_wm([row])) == classify_l1(_wm([signs]))


@pytest.mark.parametrize("row", [[1, 1], [1, 0, -1]])
def test_classify_single_row_rejects_non_admissible(row) -> None:
    with pytest.raises(NotAdmissibleError):
        classify_l1(_wm([row]))


def test_triangle() -> None:
    gon = oddgon_reduce(_wm(TRIANGLE))
    assert gon.k == 1 and gon.multiplicities == (1, 1, 1)
    assert classify_l2(_wm(TRIANGLE)).text == "S^1 x S^1 x S^1"


def test_doubled_column_groups_directions() -> None:
    weights = _wm([[1, 1, 0, -1], [0, 0, 1, -1]])
    assert oddgon_reduce(weights).multiplicities == (2, 1, 1)
    assert classify_l2(weights).text == "S^3 x S^1 x S^1"


def test_triangle_with_weights_one_one_two() -> None:
    weights = _wm([[1, 0, -1, -1], [0, 1, -1, -1]])
    assert oddgon_reduce(weights).multiplicities == (1, 1, 2)
    link = classify_l2(weights)
    assert link.kind is LinkKind.THREE_SPHERES
    assert link.text == "S^1 x S^1 x S^3"


def test_pentagon() -> None:
    weights = _wm(PENTAGON)
    gon = oddgon_reduce(weights)
    assert gon.k == 2 and gon.multiplicities == (1, 1, 1, 1, 1)
    link = classify_l2(weights)
    assert link.kind is LinkKind.CONNECTED_SUM
    assert link.text == " # ".join(["S^3 x S^4"] * 5)


def test_adjacent_directions_merge() -> None:
    # (1,0) and (2,1) have no antipode between them.
    weights = _wm([[1, 2, 0, -1], [0, 1, 1, -1]])
    gon = oddgon_reduce(weights)
    assert gon.multiplicities == (2, 1, 1)
    assert gon.directions[0] == ((1, 0), (2, 1))


def test_reduction_invariant_under_permutation_and_scaling(rng) -> None:
    base = oddgon_reduce(_wm(PENTAGON)).multiplicities
    columns = list(zip(*PENTAGON))
    for _ in range(10):
        rng.shuffle(columns)
        factors = [rng.randint(1, 3) for _ in columns]
        scaled = [tuple(c * x for x in col) for c, col in zip(factors, columns)]
        rows = [list(r) for r in zip(*scaled)]
        assert oddgon_reduce(_wm(rows)).multiplicities == base


@pytest.mark.parametrize("u", [[[1, 1], [0, 1]], [[2, 1], [1, 1]], [[0, -1], [1, 0]]])
def test_reduction_invariant_under_orientation_preserving_basis_change(u) -> None:
    fixtures = [TRIANGLE, [[1, 1, 0, -1], [0, 0, 1, -1]], [[1, 0, -1, -1], [0, 1, -1, -1]], PENTAGON]
    for rows in fixtures:
        word = list(oddgon_reduce(_wm(rows)).multiplicities)
        changed = [
            [sum(u[i][k] * rows[k][j] for k in range(2)) for j in range(len(rows[0]))]
            for i in range(2)
        ]
        assert oddgon_reduce(_wm(changed)).multiplicities in _rotations(word)


def test_odd_length_and_total_multiplicity(rng) -> None:
    checked = 0
    while checked < 15:
        n = rng.randint(3, 6)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(2)]
        weights = _wm(rows)
        try:
            gon = oddgon_reduce(weights)
        except NotAdmissibleError:
            continue
        assert len(gon.multiplicities) % 2 == 1
        assert gon.n == n
        link = classify_l2(weights)
        if gon.k >= 2:
            assert len(link.factors) == 2 * gon.k + 1
        checked += 1


def test_cross_polytope_is_rejected(a_cross) -> None:
    with pytest.raises(NotAdmissibleError) as excinfo:
        classify(a_cross)
    assert excinfo.value.report is not None
    assert excinfo.value.report.violating_subset == (0, 1)


def test_rank_dispatch() -> None:
    with pytest.raises(UnsupportedRankError):
        classify_l2(_wm([[1, -1]]))
    assert classify(cross_polytope(3)).kind is LinkKind.UNSUPPORTED


def test_strata_for_two_rows() -> None:
    poset = cross_polytope_strata(2)
    assert poset.faces == ((1,), (2,), (1, 2))
    assert poset.annotations[(1,)] == "S^1" and poset.annotations[(2,)] == "S^1"
    assert poset.annotations[(1, 2)] == "S^1 x S^1 x (0,1)"
    assert "Hopf link" in (poset.note or "")


def test_strata_for_three_rows() -> None:
    poset = cross_polytope_strata(3)
    assert len(poset.faces) == 7
    assert len(poset.atoms) == 3
    assert len(poset.covers()) == 9
    assert poset.leq((1,), (1, 3)) and not poset.leq((2,), (1, 3))
    with pytest.raises(ValidationError):
        cross_polytope_strata(1)
