"""Incremental rematching after penalizing one matched edge (KM-M).

After a single matched edge ``(u, v)`` is raised to the penalty weight the
old labels stay feasible, and only ``u`` loses its partner.  Unmatching
``u`` and running one :func:`~pmmwm.hungarian.match_vertex` call restores
an optimal matching in O(n^2) instead of the O(n^3) full rerun.
"""

from __future__ import annotations

import numpy as np

from .core import NO_MATCH, BipartiteGraph, Matching, PreconditionError
from .hungarian import DualState, SearchScratch, km_full, match_vertex


class WorkingGraph:
    """Original graph plus penalized-edge overrides.

    ``weights`` holds the effective CSR weights; ``base.weights`` is never
    touched, so objective evaluation can always read the originals.  When
    ``n1 < n2`` the CSR arrays are padded to a square graph with dummy left
    vertices joined to every v by zero-weight edges; the first ``n1`` rows
    are the real ones.
    """

    def __init__(self, base: BipartiteGraph, penalty_factor: int = 100):
        if penalty_factor < 1:
            raise ValueError("penalty_factor must be >= 1")
        self.base = base
        self.penalty = penalty_factor * base.c_max
        self.real_n1 = base.n1
        self.n2 = base.n2
        self.n1 = base.n2
        extra = base.n2 - base.n1
        if extra:
            self.indptr = np.concatenate(
                (base.indptr, base.indptr[-1] + base.n2 * np.arange(1, extra + 1)))
            self.indices = np.concatenate((base.indices, np.tile(np.arange(base.n2), extra)))
            self.weights = np.concatenate((base.weights, np.zeros(extra * base.n2, dtype=np.int64)))
        else:
            self.indptr = base.indptr
            self.indices = base.indices
            self.weights = base.weights.copy()
        self.overrides: dict[tuple[int, int], int] = {}

    @property
    def padded(self) -> bool:
        return self.n1 != self.real_n1

    def real_matching(self, pi: Matching) -> Matching:
        """Drop the dummy rows of a matching computed on the padded graph."""
        if not self.padded:
            return pi
        mv = pi.match_of_v.copy()
        mv[mv >= self.real_n1] = NO_MATCH
        return Matching(pi.match_of_u[:self.real_n1].copy(), mv)

    def effective_weight(self, u: int, v: int) -> int:
        return int(self.weights[self.base.edge_index(u, v)])

    def is_penalized(self, u: int, v: int) -> bool:
        return (u, v) in self.overrides


def penalize_edge(wg: WorkingGraph, u: int, v: int) -> bool:
    """Raise edge (u, v) to the penalty weight; False if it already was."""
    pos = wg.base.edge_index(u, v)
    if (u, v) in wg.overrides:
        return False
    wg.overrides[(u, v)] = wg.penalty
    wg.weights[pos] = wg.penalty
    return True


def kmm_step(wg: WorkingGraph, pi: Matching, duals: DualState, u: int,
             scratch: SearchScratch | None = None) -> Matching:
    """Unmatch ``u`` and rematch it on the penalized graph, reusing labels.

    ``pi`` and ``duals`` must be the optimal pair from before the latest
    penalization of ``(u, pi.match_of_u[u])``.  Both are updated in place;
    the matching is also returned.
    """
    v = int(pi.match_of_u[u])
    if v == NO_MATCH:
        raise PreconditionError(f"u={u} is not matched")
    pi.match_of_u[u] = NO_MATCH
    pi.match_of_v[v] = NO_MATCH
    match_vertex(u, wg, duals, pi, scratch)
    return pi


def kmm_entry(wg: WorkingGraph, pi: Matching | None, duals: DualState | None,
              u: int, scratch: SearchScratch | None = None) -> tuple[Matching, DualState]:
    """Full KM when there is no previous matching, else one :func:`kmm_step`."""
    if pi is None or pi.is_empty():
        return km_full(wg, scratch)
    if duals is None:
        raise PreconditionError("a non-empty matching needs its dual state")
    return kmm_step(wg, pi, duals, u, scratch), duals


def changed_vertices(before: Matching, after: Matching) -> np.ndarray:
    """Left vertices whose partner differs between two matchings."""
    return np.flatnonzero(before.match_of_u != after.match_of_u)
