from __future__ import annotations

import itertools
import random

import pytest
from sympy.polys.domains import QQ

from src.action import WeightMatrix, cross_polytope, list_invariant_monomials, moment_map, poly_weights
from src.algebra import KoszulChain, phase_ring
from src.algebra.koszul import build_splitting
from src.algebra.ring import monomial
from src.errors import ValidationError
from src.quantize import (
    DeformedChain,
    NonInvariantError,
    NuSeries,
    poisson,
    qkos,
    qres,
    star,
    star0,
    star0_table,
    wick,
)

N = 3
FIXTURES = [[[1, -1]], [[1, 1, -1]], [[1, -1, 0, 0], [0, 0, 1, -1]]]


def random_poly(ring, rng: random.Random, terms: int = 3, degree: int = 3):
    n = ring.ngens // 2
    f = ring.zero
    for _ in range(terms):
        exps = [0] * (2 * n)
        for _ in range(rng.randint(0, degree)):
            exps[rng.randrange(2 * n)] += 1
        f += ring({tuple(exps): QQ(rng.randint(-4, 4), rng.randint(1, 2))})
    return f


def random_invariant(split, rng: random.Random, maxdeg: int = 4, terms: int = 2):
    monos = list_invariant_monomials(split.moment.weights, maxdeg)
    f = split.ring.zero
    for alpha, beta in rng.sample(monos, min(terms, len(monos))):
        f += monomial(split.ring, alpha, beta, rng.randint(-3, 3))
    return NuSeries.constant(split.res(f), N)


def test_wick_examples() -> None:
    ring = phase_ring(2)
    z1, z2, zb1, zb2 = ring.gens
    assert star(z1, zb1, 2).coeffs == (z1 * zb1, ring.one, ring.zero)
    assert star(zb1, z1, 2).coeffs == (z1 * zb1, ring.zero, ring.zero)
    assert star(z1 * z2, zb1 * zb2, 2).coeffs == (z1 * z2 * zb1 * zb2, z1 * zb1 + z2 * zb2, ring.one)


def test_wick_truncates() -> None:
    ring = phase_ring(1)
    z1, zb1 = ring.gens
    product = star(z1**3, zb1**3, 1)
    assert product.coeffs == (z1**3 * zb1**3, 9 * z1**2 * zb1**2)


def test_poisson_bracket_convention() -> None:
    ring = phase_ring(2)
    z1, z2, zb1, zb2 = ring.gens
    assert poisson(z1, zb1) == ring.one
    assert poisson(zb1, z1) == -ring.one
    f = z1 * zb2 + z2**2
    assert poisson(f, f) == 0


def test_poisson_antisymmetry_and_leibniz(rng) -> None:
    ring = phase_ring(2)
    for _ in range(20):
        f, g, h = (random_poly(ring, rng) for _ in range(3))
        assert poisson(f, g) == -poisson(g, f)
        assert poisson(f, g * h) == poisson(f, g) * h + g * poisson(f, h)


@pytest.mark.parametrize("rows", FIXTURES)
def test_strong_invariance(rows, rng) -> None:
    J = moment_map(WeightMatrix.from_rows(rows), ["1"] * len(rows))
    ring = J.ring
    for _ in range(200):
        f = random_poly(ring, rng)
        for component in J.components:
            commutator = star(component, f, N) - star(f, component, N)
            expected = NuSeries(ring, N, (ring.zero, poisson(component, f)))
            assert commutator == expected


def test_wick_associativity(rng) -> None:
    ring = phase_ring(3)
    for _ in range(15):
        f, g, h = (NuSeries(ring, N, (random_poly(ring, rng, 2, 3), random_poly(ring, rng, 1, 2))) for _ in range(3))
        assert wick(wick(f, g), h) == wick(f, wick(g, h))


def test_qkos_on_generators(a_pair) -> None:
    J = moment_map(a_pair)
    ring = J.ring
    z1, z2, zb1, zb2 = ring.gens
    unit = DeformedChain.from_chain(KoszulChain.basis(ring, (0,)), N)
    assert qkos(unit, J)[()] == NuSeries.constant(J.components[0], N)

    f = z1 + zb2
    chain = DeformedChain.from_chain(KoszulChain.basis(ring, (0,), f), N)
    difference = qkos(chain, J)[()] - NuSeries.constant(f * J.components[0], N)
    assert difference[0] == 0
    assert not difference.is_zero()

    with pytest.raises(ValidationError):
        qkos(DeformedChain(ring, N, 0, {}), J)


@pytest.mark.parametrize("weights", [cross_polytope(2), cross_polytope(3)])
def test_qkos_squares_to_zero(weights, rng) -> None:
    J = moment_map(weights)
    ring = J.ring
    for degree in range(2, weights.ell + 1):
        for _ in range(4):
            terms = {
                s: NuSeries(ring, N, (random_poly(ring, rng, 2, 2), random_poly(ring, rng, 1, 1)))
                for s in itertools.combinations(range(weights.ell), degree)
            }
            chain = DeformedChain(ring, N, degree, terms)
            assert qkos(qkos(chain, J), J).is_zero()


@pytest.mark.parametrize("rows", FIXTURES)
def test_qres_is_identity_on_normal_forms(rows, rng) -> None:
    split = build_splitting(WeightMatrix.from_rows(rows))
    for _ in range(20):
        nf = split.res(random_poly(split.ring, rng))
        series = NuSeries(split.ring, N, (nf, split.res(random_poly(split.ring, rng))))
        assert qres(series, split) == series


def test_qres_vanishes_on_left_ideal(a_pair) -> None:
    split = build_splitting(a_pair)
    J1 = split.moment.components[0]
    assert qres(star(J1, J1, N), split).is_zero()
    z1, z2, zb1, zb2 = split.ring.gens
    assert qres(star(z1 * z2 + zb2, J1, N), split).is_zero()


def test_worked_example_pair(a_pair) -> None:
    split = build_splitting(a_pair)
    ring = split.ring
    z1, z2, zb1, zb2 = ring.gens
    w = NuSeries.constant(z1 * z2, 2)
    wbar = NuSeries.constant(zb1 * zb2, 2)
    assert star0(w, wbar, split).coeffs == (z2**2 * zb2**2, 3 * z2 * zb2, ring.one)
    assert star0(wbar, w, split).coeffs == (z2**2 * zb2**2, z2 * zb2, ring.zero)
    commutator = star0(w, wbar, split) - star0(wbar, w, split)
    assert commutator[1] == split.res(poisson(z1 * z2, zb1 * zb2))


def test_unit_is_neutral(a_three, rng) -> None:
    split = build_splitting(a_three)
    one = NuSeries.constant(split.ring.one, N)
    for _ in range(5):
        f = random_invariant(split, rng)
        assert star0(one, f, split) == f
        assert star0(f, one, split) == f


def test_non_invariant_input_is_rejected(a_pair) -> None:
    split = build_splitting(a_pair)
    z1, z2, zb1, zb2 = split.ring.gens
    with pytest.raises(NonInvariantError) as excinfo:
        star0(NuSeries.constant(z1, N), NuSeries.constant(split.ring.one, N), split)
    assert excinfo.value.weight == (-1,)
    with pytest.raises(ValidationError):
        star0(NuSeries.constant(z1 * zb1, N), NuSeries.constant(split.ring.one, N), split)


@pytest.mark.parametrize("rows", FIXTURES)
def test_deformation_property(rows, rng) -> None:
    weights = WeightMatrix.from_rows(rows)
    split = build_splitting(weights)
    zero = {(0,) * weights.ell}
    for _ in range(4):
        f, g = random_invariant(split, rng), random_invariant(split, rng)
        fg, gf = star0(f, g, split), star0(g, f, split)
        assert fg[0] == split.res(f[0] * g[0])
        assert (fg - gf)[1] == split.res(poisson(f[0], g[0]))
        for coeff in fg:
            assert poly_weights(weights, coeff) <= zero
            assert split.res(coeff) == coeff


def _check_associativity(rows, rng, triples: int) -> None:
    split = build_splitting(WeightMatrix.from_rows(rows))
    for _ in range(triples):
        f, g, h = (random_invariant(split, rng, maxdeg=4) for _ in range(3))
        left = star0(star0(f, g, split), h, split)
        right = star0(f, star0(g, h, split), split)
        assert left == right


@pytest.mark.parametrize("rows", FIXTURES)
def test_reduced_product_is_associative(rows, rng) -> None:
    _check_associativity(rows, rng, 3)


@pytest.mark.slow
@pytest.mark.parametrize("rows", FIXTURES)
def test_reduced_product_associativity_acceptance(rows) -> None:
    _check_associativity(rows, random.Random(11), 50)


def test_star0_table_shape(a_pair) -> None:
    split = build_splitting(a_pair)
    z1, z2, zb1, zb2 = split.ring.gens
    table = star0_table([z1 * z2, zb1 * zb2], split, 2)
    assert set(table) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert table[(0, 1)][1] == 3 * z2 * zb2
