"""Restricted partitioning: split U into m capacity-bounded parts for a fixed matching.

With the matching fixed every u carries the weight of its matched edge, and
the task reduces to min-max packing of those weights into ``m`` parts of at
most ``ubar`` items.  :func:`rph_partition` builds a greedy LPT packing and
:func:`ls_improve` polishes it with relocate/swap moves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numba
import numpy as np

from .core import BipartiteGraph, Infeasible, Matching, Partition, matched_weights


@dataclass
class RestrictedInstance:
    weights: np.ndarray
    m: int
    ubar: int

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.int64)
        if self.m < 1 or self.ubar < 1:
            raise ValueError("m and ubar must be positive")

    @classmethod
    def from_matching(cls, g: BipartiteGraph, pi: Matching, m: int, ubar: int) -> "RestrictedInstance":
        """Vertex weights from g's original edge weights, never penalized ones."""
        return cls(matched_weights(g, pi), m, ubar)

    @property
    def n(self) -> int:
        return len(self.weights)

    def feasible(self) -> bool:
        return self.m * self.ubar >= self.n


def _descending(weights: np.ndarray) -> np.ndarray:
    # heaviest first, lower index first among equals
    return np.lexsort((np.arange(len(weights)), -weights))


@numba.njit(cache=True)
def _lpt(w, order, m, ubar):
    part = np.empty(w.shape[0], dtype=np.int64)
    loads = np.zeros(m, dtype=np.int64)
    sizes = np.zeros(m, dtype=np.int64)
    for i in range(order.shape[0]):
        x = order[i]
        best = -1
        for k in range(m):
            if sizes[k] < ubar and (best < 0 or loads[k] < loads[best]):
                best = k
        part[x] = best
        loads[best] += w[x]
        sizes[best] += 1
    return part


def rph_partition(ri: RestrictedInstance) -> Partition:
    """Longest-processing-time greedy with capacities.

    Vertices go heaviest first to the least-loaded part that still has room.
    """
    if not ri.feasible():
        raise Infeasible(f"m*ubar={ri.m * ri.ubar} < n1={ri.n}")
    part = _lpt(ri.weights, _descending(ri.weights), ri.m, ri.ubar)
    return Partition(part, ri.m, ri.ubar)


@numba.njit(cache=True)
def _local_search(w, order, part, m, ubar, max_rounds):
    n = w.shape[0]
    loads = np.zeros(m, dtype=np.int64)
    sizes = np.zeros(m, dtype=np.int64)
    for x in range(n):
        loads[part[x]] += w[x]
        sizes[part[x]] += 1
    # members of every part in descending weight order, rebuilt each round
    start = np.zeros(m + 1, dtype=np.int64)
    fill = np.zeros(m, dtype=np.int64)
    members = np.empty(n, dtype=np.int64)
    rounds = 0
    while rounds < max_rounds:
        k = 0
        for j in range(1, m):
            if loads[j] > loads[k]:
                k = j
        top = loads[k]
        start[0] = 0
        for j in range(m):
            start[j + 1] = start[j] + sizes[j]
            fill[j] = start[j]
        for i in range(n):
            x = order[i]
            members[fill[part[x]]] = x
            fill[part[x]] += 1

        moved = False
        for a in range(start[k], start[k + 1]):
            x = members[a]
            if w[x] == 0:
                break
            for j in range(m):
                if j != k and sizes[j] < ubar and loads[j] + w[x] < top:
                    part[x] = j
                    loads[k] -= w[x]
                    loads[j] += w[x]
                    sizes[k] -= 1
                    sizes[j] += 1
                    moved = True
                    break
            if moved:
                break
        if not moved:
            for a in range(start[k], start[k + 1]):
                x = members[a]
                for j in range(m):
                    if j == k:
                        continue
                    for b in range(start[j], start[j + 1]):
                        y = members[b]
                        if w[y] < w[x] and loads[j] - w[y] + w[x] < top:
                            part[x] = j
                            part[y] = k
                            loads[k] += w[y] - w[x]
                            loads[j] += w[x] - w[y]
                            moved = True
                            break
                    if moved:
                        break
                if moved:
                    break
        if not moved:
            break
        rounds += 1
    return rounds


def ls_improve(p: Partition, ri: RestrictedInstance) -> Partition:
    """First-improvement local search on the heaviest part.

    Each round takes the heaviest part (lowest index on ties) and applies the
    first move that leaves both touched parts strictly lighter than it was:
    relocating one of its vertices to a part with spare capacity, or failing
    that, swapping one of its vertices with a lighter vertex of another part.
    Parts are scanned in ascending index order and vertices heaviest first.
    Stops when no such move exists or after ``10 * n1`` rounds.
    """
    part = np.array(p.part_of_u, dtype=np.int64)
    _local_search(ri.weights, _descending(ri.weights), part, ri.m, ri.ubar, 10 * ri.n)
    return Partition(part, ri.m, ri.ubar)


def max_load(p: Partition, weights: np.ndarray) -> int:
    loads = np.zeros(p.m, dtype=np.int64)
    np.add.at(loads, p.part_of_u, weights)
    return int(loads.max())


PartitionStrategy = Callable[[RestrictedInstance], Partition]


def greedy_then_local_search(ri: RestrictedInstance) -> Partition:
    """Default stage-2 strategy."""
    return ls_improve(rph_partition(ri), ri)
