"""The three-stage matching/partitioning/penalization loop (MP_LS and MP_KM-M).

Each iteration:

1. computes a minimum-weight perfect matching of the working graph, from
   scratch (``MP_LS``) or by rematching one vertex (``MP_KM_M``);
2. partitions U for that matching using original weights, and records the
   solution if it beats the best so far;
3. penalizes the heaviest matched edge of the heaviest part.

The loop stops after ``patience`` consecutive iterations without a strict
improvement of the best objective.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    BipartiteGraph,
    Infeasible,
    Matching,
    Partition,
    Solution,
    edge_positions,
    evaluate_objective,
    partition_weights,
)
from .hungarian import DualState, SearchScratch, canonicalize, km_full
from .incremental import WorkingGraph, kmm_entry, penalize_edge
from .partitioning import PartitionStrategy, RestrictedInstance, greedy_then_local_search


class Variant(str, enum.Enum):
    MP_LS = "MP_LS"
    MP_KM_M = "MP_KM_M"


@dataclass
class SolverConfig:
    penalty_factor: int = 100
    patience: int = 20
    variant: Variant = Variant.MP_KM_M
    # reserved: the pipeline is deterministic
    rng_seed: int = 0
    # rewrite every stage-1 optimum into the canonical optimal matching
    canonical_ties: bool = True

    def __post_init__(self):
        self.variant = Variant(self.variant)
        if self.penalty_factor < 1:
            raise ValueError("penalty_factor must be >= 1")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")


@dataclass
class IterationRecord:
    iteration: int
    objective: int
    best_objective: int
    matching_total: int
    penalized_edge: Optional[tuple[int, int]]
    stage_ns: tuple[int, int, int]
    stage1_ops: int


@dataclass
class IterationTrace:
    records: list[IterationRecord] = field(default_factory=list)
    total_ns: int = 0

    def __len__(self) -> int:
        return len(self.records)

    @property
    def iterations(self) -> int:
        return len(self.records)

    def stage_ns(self) -> np.ndarray:
        """(iterations, 3) array of per-stage nanoseconds."""
        return np.array([r.stage_ns for r in self.records], dtype=np.int64).reshape(-1, 3)

    def best_curve(self) -> list[int]:
        return [r.best_objective for r in self.records]


class SolverError(Infeasible):
    def __init__(self, iteration: int, cause: Exception):
        self.iteration = iteration
        self.cause = cause
        super().__init__(f"iteration {iteration}: {cause}")


def select_penalty_edge(g: BipartiteGraph, pi: Matching, p: Partition) -> tuple[int, int]:
    """Heaviest matched edge (original weight) of the heaviest part; lowest index on ties."""
    k = int(np.argmax(partition_weights(g, pi, p)))
    members = p.members(k)
    w = g.weights[edge_positions(g, pi)][members]
    u = int(members[int(np.argmax(w))])
    return u, int(pi.match_of_u[u])


def run(g: BipartiteGraph, m: int, ubar: int, cfg: SolverConfig | None = None,
        partitioner: PartitionStrategy = greedy_then_local_search) -> tuple[Solution, IterationTrace]:
    """Solve one PMMWM instance; returns the best solution and the iteration trace."""
    cfg = cfg or SolverConfig()
    if m * ubar < g.n1:
        raise Infeasible(f"m*ubar={m * ubar} < n1={g.n1}")
    clock = time.perf_counter_ns
    wg = WorkingGraph(g, cfg.penalty_factor)
    scratch = SearchScratch(wg.n1, wg.n2)
    incremental = cfg.variant is Variant.MP_KM_M
    trace = IterationTrace()

    pi: Optional[Matching] = None
    duals: Optional[DualState] = None
    seed_u = 0
    changed = True
    best: Optional[Solution] = None
    stale = 0
    it = 0
    start = clock()
    while True:
        it += 1
        try:
            t0 = clock()
            scratch.reset_ops()
            if incremental:
                if changed:
                    pi, duals = kmm_entry(wg, pi, duals, seed_u, scratch)
                    if cfg.canonical_ties:
                        canonicalize(wg, duals, pi)
            else:
                pi, duals = km_full(wg, scratch)
                if cfg.canonical_ties:
                    canonicalize(wg, duals, pi)
            real = wg.real_matching(pi)
            total = int(wg.weights[edge_positions(g, real)].sum())
            t1 = clock()
            ops = scratch.ops

            ri = RestrictedInstance.from_matching(g, real, m, ubar)
            p = partitioner(ri)
            f = evaluate_objective(g, real, p)
            if best is None or f < best.objective:
                best = Solution(real.copy(), p, f)
                stale = 0
            else:
                stale += 1
            t2 = clock()

            edge = None
            if stale < cfg.patience:
                edge = select_penalty_edge(g, real, p)
                changed = penalize_edge(wg, *edge)
                seed_u = edge[0]
            t3 = clock()
        except Infeasible as exc:
            raise SolverError(it, exc) from exc

        trace.records.append(IterationRecord(
            iteration=it,
            objective=f,
            best_objective=best.objective,
            matching_total=total,
            penalized_edge=edge,
            stage_ns=(t1 - t0, t2 - t1, t3 - t2),
            stage1_ops=ops,
        ))
        if edge is None:
            break
    trace.total_ns = clock() - start
    return best, trace
