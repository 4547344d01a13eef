import numpy as np
import pytest

from pmmwm.core import Infeasible, Matching, Partition
from pmmwm.oracle import brute_min_max_partition
from pmmwm.partitioning import (
    RestrictedInstance,
    greedy_then_local_search,
    ls_improve,
    max_load,
    rph_partition,
)


def test_rph_lpt_example():
    ri = RestrictedInstance([4, 3, 3, 2], 2, 2)
    p = rph_partition(ri)
    assert p.part_of_u.tolist() == [0, 1, 1, 0]
    # frozen from the exhaustive oracle over the three feasible splits
    assert max_load(p, ri.weights) == 6


def test_rph_forced_cases():
    w = [5, 9, 2, 7]
    p = rph_partition(RestrictedInstance(w, 4, 1))
    assert sorted(p.part_of_u.tolist()) == [0, 1, 2, 3]
    assert max_load(p, np.array(w)) == 9
    p = rph_partition(RestrictedInstance(w, 1, 4))
    assert max_load(p, np.array(w)) == 23


def test_rph_infeasible():
    with pytest.raises(Infeasible):
        rph_partition(RestrictedInstance([1, 2, 3], 1, 2))


def test_ls_fig1_relocation():
    # loads 4, 2, 5; moving the weight-1 vertex of the last part yields 4, 3, 4
    w = np.array([1, 3, 1, 1, 4, 1])
    ri = RestrictedInstance(w, 3, 3)
    p = ls_improve(Partition([0, 0, 1, 1, 2, 2], 3, 3), ri)
    assert p.part_of_u.tolist() == [0, 0, 1, 1, 2, 1]
    assert max_load(p, w) == 4


def test_ls_balanced_unchanged():
    ri = RestrictedInstance([2, 2, 2, 2], 2, 2)
    p = ls_improve(Partition([0, 1, 0, 1], 2, 2), ri)
    assert p.part_of_u.tolist() == [0, 1, 0, 1]


def test_ls_relocates_to_optimum():
    ri = RestrictedInstance([5, 1, 1, 1], 2, 3)
    p = ls_improve(Partition([0, 0, 1, 1], 2, 3), ri)
    assert max_load(p, ri.weights) == 5 == brute_min_max_partition([5, 1, 1, 1], 2, 3)


def test_ls_swap_move():
    # parts {6,3} and {4,1} are full, so only swapping 6 with 4 helps
    w = np.array([6, 3, 4, 1])
    ri = RestrictedInstance(w, 2, 2)
    p = ls_improve(Partition([0, 0, 1, 1], 2, 2), ri)
    assert p.part_of_u.tolist() == [1, 0, 0, 1]
    assert max_load(p, w) == 7 == brute_min_max_partition(w.tolist(), 2, 2)


def test_from_matching_uses_original_weights(fig2_graph):
    from pmmwm.incremental import WorkingGraph, penalize_edge
    wg = WorkingGraph(fig2_graph)
    penalize_edge(wg, 0, 0)
    pi = Matching.from_pairs(3, 3, [0, 2, 1])
    ri = RestrictedInstance.from_matching(fig2_graph, pi, 2, 2)
    assert ri.weights.tolist() == [2, 1, 1]


def test_within_twice_optimum(rng):
    for _ in range(150):
        n = int(rng.integers(2, 9))
        m = int(rng.integers(1, 4))
        ubar = int(rng.integers(-(-n // m), n + 1))
        w = rng.integers(1, 50, size=n)
        ri = RestrictedInstance(w, m, ubar)
        p = greedy_then_local_search(ri)
        assert p.is_feasible() and len(p.part_of_u) == n
        got = max_load(p, w)
        assert got <= 2 * brute_min_max_partition(w.tolist(), m, ubar)
        assert got >= max(w.max(), -(-w.sum() // m))
        assert got <= max_load(rph_partition(ri), w)
