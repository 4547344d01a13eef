import numpy as np
import pytest

from conftest import rematch_instance
from pmmwm.core import BipartiteGraph, Infeasible, TooLarge
from pmmwm.oracle import (
    brute_max_cardinality,
    brute_min_matching,
    brute_min_max_partition,
    brute_pmmwm,
    capacity_partitions,
    perfect_matchings,
)


def test_min_matching_examples():
    assert brute_min_matching(BipartiteGraph.from_dense(np.array([[7]]))) == 7
    assert brute_min_matching(BipartiteGraph.from_dense(np.array([[1, 2], [3, 1]]))) == 2
    g = BipartiteGraph(3, 3, [(0, 0, 4), (1, 1, 5), (2, 2, 6)])
    assert brute_min_matching(g) == 15


def test_min_matching_limits():
    g = BipartiteGraph.from_dense(np.ones((9, 9), dtype=int))
    with pytest.raises(TooLarge):
        brute_min_matching(g)
    with pytest.raises(Infeasible):
        brute_min_matching(BipartiteGraph(2, 2, [(0, 0, 1), (1, 0, 1)]))


def test_perfect_matching_count():
    g = BipartiteGraph.from_dense(np.ones((4, 4), dtype=int))
    assert sum(1 for _ in perfect_matchings(g)) == 24


def test_capacity_partitions_counts():
    # set partitions of 4 items into at most 2 blocks of size <= 2: {ab|cd} x3
    assert len(list(capacity_partitions(4, 2, 2))) == 3
    # Stirling S(4,1)+S(4,2) = 1 + 7
    assert len(list(capacity_partitions(4, 2, 4))) == 8
    assert list(capacity_partitions(3, 1, 2)) == []


def test_min_max_partition():
    assert brute_min_max_partition([4, 3, 3, 2], 2, 2) == 6
    assert brute_min_max_partition([5, 1, 1, 1], 2, 3) == 5
    with pytest.raises(Infeasible):
        brute_min_max_partition([1, 1, 1], 1, 2)


def test_pmmwm_single_part_equals_min_matching(rng):
    from conftest import random_graph
    for _ in range(10):
        g = random_graph(rng, 5, density=0.6)
        assert brute_pmmwm(g, 1, 5) == brute_min_matching(g)


def test_pmmwm_rematch_narrative():
    g = rematch_instance()
    assert brute_min_matching(g) == 110
    # the lightest matching alone cannot beat 50 with pairs of two
    assert brute_min_max_partition([10, 30, 10, 10, 40, 10], 3, 2) == 50
    # a matching of larger total weight reaches 40
    assert brute_pmmwm(g, 3, 2) == 40


def test_pmmwm_equal_weights():
    g = BipartiteGraph.from_dense(np.full((6, 6), 7))
    assert brute_pmmwm(g, 3, 2) == 2 * 7
    assert brute_pmmwm(g, 2, 3) == 3 * 7


def test_pmmwm_limits():
    g = BipartiteGraph.from_dense(np.ones((7, 7), dtype=int))
    with pytest.raises(TooLarge):
        brute_pmmwm(g, 2, 4)
    with pytest.raises(Infeasible):
        brute_pmmwm(BipartiteGraph.from_dense(np.ones((3, 3), dtype=int)), 1, 2)


def test_brute_max_cardinality():
    g = BipartiteGraph(3, 3, [(0, 0, 1), (1, 0, 1), (2, 1, 1), (2, 2, 1)])
    assert brute_max_cardinality(g) == 2
