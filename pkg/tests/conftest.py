from __future__ import annotations

import random

import pytest

from src.action import WeightMatrix, cross_polytope


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240607)


@pytest.fixture
def a_pair() -> WeightMatrix:
    return WeightMatrix.from_rows([[1, -1]])


@pytest.fixture
def a_three() -> WeightMatrix:
    return WeightMatrix.from_rows([[1, 1, -1]])


@pytest.fixture
def a_cross() -> WeightMatrix:
    return cross_polytope(2)
