"""Minimum-weight matching with KM, then a single-vertex rematch after a penalty."""

import numpy as np

from pmmwm.core import BipartiteGraph
from pmmwm.hungarian import is_dual_feasible, km_full, matching_total
from pmmwm.incremental import WorkingGraph, changed_vertices, kmm_step, penalize_edge

g = BipartiteGraph.from_dense(np.array([[2, 3, 5],
                                        [5, 5, 1],
                                        [1, 1, 5]]))
wg = WorkingGraph(g)
pi, duals = km_full(wg)
print("optimal matching (u -> v):", pi.match_of_u.tolist(), "total", matching_total(wg, pi))
print("labels ex_u", duals.ex_u.tolist(), "ex_v", duals.ex_v.tolist())

# raise (u1, v1) to 100 * c_max and rematch only u1
before = pi.copy()
penalize_edge(wg, 0, 0)
print("penalized weight:", wg.effective_weight(0, 0))
kmm_step(wg, pi, duals, 0)
print("after rematch:", pi.match_of_u.tolist(), "total", matching_total(wg, pi))
print("vertices that moved:", changed_vertices(before, pi).tolist())
print("labels still feasible:", is_dual_feasible(wg, duals))

ref, _ = km_full(wg)
assert matching_total(wg, ref) == matching_total(wg, pi)
print("a fresh full KM agrees on the weight")
