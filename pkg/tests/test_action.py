from __future__ import annotations

import pytest
from sympy.polys.domains import QQ

from src.action import (
    DimensionError,
    WeightMatrix,
    cross_polytope,
    is_invariant,
    list_invariant_monomials,
    moment_map,
    monomial_weight,
    normalize,
    poly_weights,
    replicate,
)
from src.algebra.ring import phase_ring
from src.errors import ValidationError
from src.exact import QMatrix


def test_from_rows_validates_entries() -> None:
    with pytest.raises(ValidationError):
        WeightMatrix.from_rows([[1, 0.5]])
    with pytest.raises(ValidationError):
        WeightMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(ValidationError):
        WeightMatrix.from_rows([[True, 1]])


def test_normalize_effective_matrix_is_kept(a_pair) -> None:
    norm = normalize(a_pair)
    assert norm.was_effective
    assert norm.effective.tolist() == [[1, -1]]


def test_normalize_divides_out_trivial_subtorus() -> None:
    weights = WeightMatrix.from_rows([[1, -1], [2, -2]])
    norm = normalize(weights)
    assert not norm.was_effective
    assert norm.effective.ell == 1
    assert norm.effective.to_qmatrix().row_space_contains(weights.to_qmatrix())
    assert weights.to_qmatrix().row_space_contains(norm.effective.to_qmatrix())


def test_normalize_row_space_preserved(rng) -> None:
    for _ in range(25):
        ell, n = rng.randint(1, 3), rng.randint(1, 5)
        weights = WeightMatrix.from_rows(
            [[rng.randint(-3, 3) for _ in range(n)] for _ in range(ell)]
        )
        norm = normalize(weights)
        rank = weights.to_qmatrix().rank()
        assert norm.effective.ell == rank
        assert norm.was_effective == (rank == ell)
        if rank:
            assert norm.effective.to_qmatrix().row_space_contains(weights.to_qmatrix())


def test_cross_polytope_and_replicate() -> None:
    assert cross_polytope(2).tolist() == [[1, -1, 0, 0], [0, 0, 1, -1]]
    assert replicate(WeightMatrix.from_rows([[1, -1]]), 3).tolist() == [[1, -1, 1, -1, 1, -1]]
    with pytest.raises(ValidationError):
        replicate(WeightMatrix.from_rows([[1, -1]]), 0)
    with pytest.raises(ValidationError):
        cross_polytope(0)


def test_monomial_weights(a_pair) -> None:
    assert monomial_weight(a_pair, (1, 1), (0, 0)) == (0,)
    assert monomial_weight(a_pair, (1, 0), (0, 0)) == (-1,)
    assert monomial_weight(a_pair, (0, 0), (1, 0)) == (1,)
    with pytest.raises(DimensionError):
        monomial_weight(a_pair, (1,), (0, 0))


def test_invariance_of_polynomials(a_pair) -> None:
    ring = phase_ring(2)
    z1, z2, zb1, zb2 = ring.gens
    assert is_invariant(a_pair, z1 * z2 + zb1 * zb2 + z1 * zb1)
    assert not is_invariant(a_pair, z1 * zb2)
    assert poly_weights(a_pair, z1 + zb1) == {(-1,), (1,)}


def test_list_invariant_monomials_order(a_pair) -> None:
    found = list_invariant_monomials(a_pair, 2)
    assert found == [
        ((0, 0), (0, 0)),
        ((1, 1), (0, 0)),
        ((1, 0), (1, 0)),
        ((0, 1), (0, 1)),
        ((0, 0), (1, 1)),
    ]


def test_moment_map_components() -> None:
    weights = WeightMatrix.from_rows([[1, -1]])
    J = moment_map(weights, ["1/2"])
    z1, z2, zb1, zb2 = J.ring.gens
    assert J.components == (z1 * zb1 - z2 * zb2 - QQ(1, 2),)
    assert not J.is_homogeneous
    assert moment_map(weights).is_homogeneous
    with pytest.raises(DimensionError):
        moment_map(weights, ["1", "2"])


def test_moment_components_are_invariant(a_cross) -> None:
    J = moment_map(a_cross)
    assert all(is_invariant(a_cross, c) for c in J.components)
    assert QMatrix.from_rows(a_cross.entries).rank() == 2
