"""Brute-force references for tests.  Deliberately slow and self-contained.

Nothing here imports the matching or partitioning code; only the graph
container from :mod:`pmmwm.core` is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from .core import BipartiteGraph, Infeasible, TooLarge


@dataclass(frozen=True)
class OracleLimits:
    max_n_matching: int = 8
    max_n_pmmwm: int = 6
    max_m_pmmwm: int = 3


LIMITS = OracleLimits()


def _weight_table(g: BipartiteGraph) -> list[dict[int, int]]:
    table = [dict() for _ in range(g.n1)]
    for u, v, w in g.edges():
        table[u][v] = w
    return table


def perfect_matchings(g: BipartiteGraph):
    """Yield (assignment, per-u weights) for every perfect matching on U."""
    table = _weight_table(g)
    for vs in permutations(range(g.n2), g.n1):
        ws = []
        for u, v in enumerate(vs):
            w = table[u].get(v)
            if w is None:
                break
            ws.append(w)
        else:
            yield vs, ws


def brute_min_matching(g: BipartiteGraph) -> int:
    """Exhaustive minimum total weight over all perfect matchings on U."""
    if g.n1 > LIMITS.max_n_matching:
        raise TooLarge(f"n1={g.n1} exceeds {LIMITS.max_n_matching}")
    best = None
    for _, ws in perfect_matchings(g):
        s = sum(ws)
        if best is None or s < best:
            best = s
    if best is None:
        raise Infeasible("graph has no perfect matching on U")
    return best


def capacity_partitions(n: int, m: int, ubar: int):
    """Every assignment of n items to m parts with at most ubar per part.

    Parts are canonically ordered (part k opens only after part k-1 is used),
    so each set partition appears once.
    """
    def rec(i, labels, sizes, opened):
        if i == n:
            yield tuple(labels)
            return
        for k in range(min(opened + 1, m)):
            if sizes[k] < ubar:
                labels.append(k)
                sizes[k] += 1
                yield from rec(i + 1, labels, sizes, max(opened, k + 1))
                sizes[k] -= 1
                labels.pop()

    yield from rec(0, [], [0] * m, 0)


def brute_min_max_partition(weights, m: int, ubar: int) -> int:
    """Optimal max part load for fixed item weights."""
    best = None
    for labels in capacity_partitions(len(weights), m, ubar):
        loads = [0] * m
        for w, k in zip(weights, labels):
            loads[k] += w
        if best is None or max(loads) < best:
            best = max(loads)
    if best is None:
        raise Infeasible(f"{len(weights)} items do not fit in {m} parts of {ubar}")
    return best


def brute_pmmwm(g: BipartiteGraph, m: int, ubar: int) -> int:
    """Exhaustive PMMWM optimum over (perfect matching, feasible partition)."""
    if g.n1 > LIMITS.max_n_pmmwm or m > LIMITS.max_m_pmmwm:
        raise TooLarge(f"n1={g.n1}, m={m} exceed oracle limits")
    if m * ubar < g.n1:
        raise Infeasible(f"m*ubar={m * ubar} < n1={g.n1}")
    parts = list(capacity_partitions(g.n1, m, ubar))
    best = None
    for _, ws in perfect_matchings(g):
        for labels in parts:
            loads = [0] * m
            for w, k in zip(ws, labels):
                loads[k] += w
            f = max(loads)
            if best is None or f < best:
                best = f
    if best is None:
        raise Infeasible("graph has no perfect matching on U")
    return best


def brute_max_cardinality(g: BipartiteGraph) -> int:
    """Largest matching size by exhaustive search over U subsets (tiny graphs only)."""
    if g.n1 > LIMITS.max_n_pmmwm:
        raise TooLarge(f"n1={g.n1} exceeds {LIMITS.max_n_pmmwm}")
    table = _weight_table(g)
    best = 0
    for choice in product(*[[None, *sorted(row)] for row in table]):
        used = [v for v in choice if v is not None]
        if len(used) == len(set(used)):
            best = max(best, len(used))
    return best
