"""Capacity-bounded min-max partitioning of a fixed matching's weights."""

import numpy as np

from pmmwm.core import Partition
from pmmwm.oracle import brute_min_max_partition
from pmmwm.partitioning import RestrictedInstance, ls_improve, max_load, rph_partition

w = np.array([1, 3, 1, 1, 4, 1])
start = Partition([0, 0, 1, 1, 2, 2], m=3, ubar=3)
ri = RestrictedInstance(w, 3, 3)
loads = np.bincount(start.part_of_u, weights=w, minlength=3)
print("start loads:", loads.astype(int).tolist())

better = ls_improve(start, ri)
loads = np.bincount(better.part_of_u, weights=w, minlength=3)
print("after local search:", loads.astype(int).tolist(), "parts", better.part_of_u.tolist())

rng = np.random.default_rng(3)
gaps = []
for _ in range(200):
    w = rng.integers(1, 60, size=8)
    ri = RestrictedInstance(w, 3, 3)
    got = max_load(ls_improve(rph_partition(ri), ri), w)
    gaps.append(got / brute_min_max_partition(w.tolist(), 3, 3))
print(f"greedy + local search vs exhaustive optimum over 200 draws: "
      f"mean ratio {np.mean(gaps):.3f}, worst {np.max(gaps):.3f}, optimal {np.mean(np.equal(gaps, 1)):.0%}")
