import pytest

from gf_tower import tower_for_order
from matrix_graph import GraphParams


@pytest.fixture
def f2():
    return tower_for_order(2, 1)


@pytest.fixture
def f4():
    """F_4 sobre F_2 (N = 2)"""
    return tower_for_order(2, 2)


@pytest.fixture
def f8():
    """F_8 com α^3 = α + 1"""
    return tower_for_order(2, 3)


@pytest.fixture
def f9():
    """F_9 sobre F_3 (N = 2)"""
    return tower_for_order(3, 2)


@pytest.fixture
def m22():
    """M_{2×2}(2): 16 vértices de grau 9"""
    return GraphParams.create(tower_for_order(2, 2), 2)


@pytest.fixture
def m32():
    """M_{3×2}(2): 64 vértices de grau 21"""
    return GraphParams.create(tower_for_order(2, 3), 2)
