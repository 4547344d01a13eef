"""Kuhn-Munkres (Hungarian) algorithm with slack arrays.

The minimum-weight perfect matching on U is solved as a maximum-weight
matching of the negated weights ``ĉ = -c``.  Labels therefore satisfy
``ex_u[u] + ex_v[v] >= -c[u, v]`` on every edge, with equality on matched
edges once a vertex has been matched.

Any graph-like object exposing ``n1``, ``n2`` and CSR arrays ``indptr``,
``indices``, ``weights`` is accepted, so the same routines run on a
:class:`~pmmwm.core.BipartiteGraph` and on a penalized
:class:`~pmmwm.incremental.WorkingGraph`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .core import NO_MATCH, Infeasible, IsolatedVertex, Matching

INF = np.iinfo(np.int64).max

# qstate layout: [queue head, queue tail, root, elementary-op counter]
_HEAD, _TAIL, _ROOT, _OPS = 0, 1, 2, 3


@dataclass
class DualState:
    ex_u: np.ndarray
    ex_v: np.ndarray
    negated: bool = True

    def copy(self) -> "DualState":
        return DualState(self.ex_u.copy(), self.ex_v.copy(), self.negated)


class SearchScratch:
    """Per-run search buffers: visited flags, slack, tree links and BFS queue."""

    def __init__(self, n1: int, n2: int):
        self.vis_u = np.zeros(n1, dtype=np.bool_)
        self.vis_v = np.zeros(n2, dtype=np.bool_)
        self.slack_v = np.full(n2, INF, dtype=np.int64)
        self.slack_arg_v = np.full(n2, NO_MATCH, dtype=np.int64)
        # pred_v[v]: the tree vertex u through which v was reached
        self.pred_v = np.full(n2, NO_MATCH, dtype=np.int64)
        self.queue = np.zeros(n1, dtype=np.int64)
        self.qstate = np.zeros(4, dtype=np.int64)

    @property
    def ops(self) -> int:
        return int(self.qstate[_OPS])

    def reset_ops(self) -> None:
        self.qstate[_OPS] = 0


# ---------------------------------------------------------------- kernels

@numba.njit(cache=True)
def _init_duals(n1, indptr, w, ex_u, ex_v):
    ex_v[:] = 0
    for u in range(n1):
        lo, hi = indptr[u], indptr[u + 1]
        if lo == hi:
            return u
        best = -w[lo]
        for e in range(lo + 1, hi):
            if -w[e] > best:
                best = -w[e]
        ex_u[u] = best
    return -1


@numba.njit(cache=True)
def _augment(v, pred_v, mu, mv):
    while True:
        u = pred_v[v]
        nxt = mu[u]
        mu[u] = v
        mv[v] = u
        if nxt == -1:
            return
        v = nxt


@numba.njit(cache=True)
def _search(root, fresh, indptr, indices, w, ex_u, ex_v, mu, mv,
            vis_u, vis_v, slack, slack_arg, pred_v, queue, qstate):
    """Grow the alternating tree over equality edges; 1 if u was augmented.

    ``fresh`` clears the tree and starts at ``root``.  Otherwise the search
    resumes from the current tree, first absorbing the edges that the last
    label update made tight (``slack_v == 0``).
    """
    n2 = vis_v.shape[0]
    ops = 0
    if fresh:
        vis_u[:] = False
        vis_v[:] = False
        slack[:] = INF
        queue[0] = root
        qstate[_HEAD] = 0
        qstate[_TAIL] = 1
        qstate[_ROOT] = root
        vis_u[root] = True
        ops += n2
    else:
        for v in range(n2):
            ops += 1
            if not vis_v[v] and slack[v] == 0:
                vis_v[v] = True
                pred_v[v] = slack_arg[v]
                if mv[v] == -1:
                    _augment(v, pred_v, mu, mv)
                    qstate[_OPS] += ops
                    return 1
                u2 = mv[v]
                vis_u[u2] = True
                queue[qstate[_TAIL]] = u2
                qstate[_TAIL] += 1
    while qstate[_HEAD] < qstate[_TAIL]:
        u = queue[qstate[_HEAD]]
        qstate[_HEAD] += 1
        for e in range(indptr[u], indptr[u + 1]):
            ops += 1
            v = indices[e]
            if vis_v[v]:
                continue
            d = ex_u[u] + ex_v[v] + w[e]
            if d == 0:
                vis_v[v] = True
                pred_v[v] = u
                if mv[v] == -1:
                    _augment(v, pred_v, mu, mv)
                    qstate[_OPS] += ops
                    return 1
                u2 = mv[v]
                vis_u[u2] = True
                queue[qstate[_TAIL]] = u2
                qstate[_TAIL] += 1
            elif d < slack[v]:
                slack[v] = d
                slack_arg[v] = u
    qstate[_OPS] += ops
    return 0


@numba.njit(cache=True)
def _relabel(ex_u, ex_v, vis_v, slack, queue, qstate):
    """Apply the minimum-slack label update; returns delta or -1 if none exists."""
    n2 = vis_v.shape[0]
    delta = INF
    for v in range(n2):
        if not vis_v[v] and slack[v] < delta:
            delta = slack[v]
    if delta == INF:
        return -1
    for i in range(qstate[_TAIL]):
        ex_u[queue[i]] -= delta
    for v in range(n2):
        if vis_v[v]:
            ex_v[v] += delta
        elif slack[v] != INF:
            slack[v] -= delta
    qstate[_OPS] += 2 * n2 + qstate[_TAIL]
    return delta


@numba.njit(cache=True)
def _match_vertex(u, indptr, indices, w, ex_u, ex_v, mu, mv,
                  vis_u, vis_v, slack, slack_arg, pred_v, queue, qstate):
    found = _search(u, True, indptr, indices, w, ex_u, ex_v, mu, mv,
                    vis_u, vis_v, slack, slack_arg, pred_v, queue, qstate)
    adjustments = 0
    while not found:
        if _relabel(ex_u, ex_v, vis_v, slack, queue, qstate) < 0:
            return -1
        adjustments += 1
        found = _search(u, False, indptr, indices, w, ex_u, ex_v, mu, mv,
                        vis_u, vis_v, slack, slack_arg, pred_v, queue, qstate)
    return adjustments


@numba.njit(cache=True)
def _match_all(indptr, indices, w, ex_u, ex_v, mu, mv,
               vis_u, vis_v, slack, slack_arg, pred_v, queue, qstate):
    for u in range(mu.shape[0]):
        if mu[u] != -1:
            continue
        if _match_vertex(u, indptr, indices, w, ex_u, ex_v, mu, mv,
                         vis_u, vis_v, slack, slack_arg, pred_v, queue, qstate) < 0:
            return u
    return -1


# ------------------------------------------------------------- public API

def _csr(g):
    return g.indptr, g.indices, g.weights


def init_duals(g) -> DualState:
    """Initial feasible labels: ``ex_v = 0`` and ``ex_u = max_v ĉ[u, v]``."""
    ex_u = np.zeros(g.n1, dtype=np.int64)
    ex_v = np.zeros(g.n2, dtype=np.int64)
    bad = _init_duals(g.n1, g.indptr, g.weights, ex_u, ex_v)
    if bad >= 0:
        raise IsolatedVertex(f"u={bad} has no incident edges")
    return DualState(ex_u, ex_v)


def find_path(u: int, g, duals: DualState, matching: Matching,
              scratch: SearchScratch, resume: bool = False) -> bool:
    """One search pass for an augmenting path from ``u`` in the equality subgraph.

    On success the matching is flipped along the path and True is returned.
    On failure the matching is untouched and ``scratch.slack_v`` holds, for
    every unvisited ``v``, the minimum reduced cost over visited ``u``.
    With ``resume=True`` the previous tree in ``scratch`` is extended instead
    of being cleared.
    """
    indptr, indices, w = _csr(g)
    return bool(_search(u, not resume, indptr, indices, w, duals.ex_u, duals.ex_v,
                        matching.match_of_u, matching.match_of_v,
                        scratch.vis_u, scratch.vis_v, scratch.slack_v,
                        scratch.slack_arg_v, scratch.pred_v, scratch.queue,
                        scratch.qstate))


def match_vertex(u: int, g, duals: DualState, matching: Matching,
                 scratch: SearchScratch | None = None) -> int:
    """Match the free vertex ``u``, adjusting labels as needed.

    Returns the number of label adjustments performed.  Raises
    :class:`Infeasible` if no augmenting path exists for any labelling.
    """
    if matching.match_of_u[u] != NO_MATCH:
        raise ValueError(f"u={u} is already matched")
    if scratch is None:
        scratch = SearchScratch(g.n1, g.n2)
    indptr, indices, w = _csr(g)
    r = _match_vertex(u, indptr, indices, w, duals.ex_u, duals.ex_v,
                      matching.match_of_u, matching.match_of_v,
                      scratch.vis_u, scratch.vis_v, scratch.slack_v,
                      scratch.slack_arg_v, scratch.pred_v, scratch.queue,
                      scratch.qstate)
    if r < 0:
        raise Infeasible(f"u={u} cannot be matched: no perfect matching on U exists")
    return int(r)


def match_all(g, duals: DualState, matching: Matching,
              scratch: SearchScratch | None = None) -> None:
    """Match every free u in ascending index order."""
    if scratch is None:
        scratch = SearchScratch(g.n1, g.n2)
    indptr, indices, w = _csr(g)
    bad = _match_all(indptr, indices, w, duals.ex_u, duals.ex_v,
                     matching.match_of_u, matching.match_of_v,
                     scratch.vis_u, scratch.vis_v, scratch.slack_v,
                     scratch.slack_arg_v, scratch.pred_v, scratch.queue,
                     scratch.qstate)
    if bad >= 0:
        raise Infeasible(f"u={bad} cannot be matched: no perfect matching on U exists")


def km_full(g, scratch: SearchScratch | None = None) -> tuple[Matching, DualState]:
    """Minimum-weight perfect matching on U from scratch, with its final labels."""
    duals = init_duals(g)
    matching = Matching.empty(g.n1, g.n2)
    match_all(g, duals, matching, scratch)
    return matching, duals


# ---------------------------------------------------------- invariant checks

def reduced_costs(g, duals: DualState) -> np.ndarray:
    """``ex_u + ex_v - ĉ`` for every edge, in CSR order."""
    rows = np.repeat(np.arange(g.n1), np.diff(g.indptr))
    return duals.ex_u[rows] + duals.ex_v[g.indices] + g.weights


def is_dual_feasible(g, duals: DualState) -> bool:
    return bool(np.all(reduced_costs(g, duals) >= 0))


def is_complementary(g, duals: DualState, matching: Matching) -> bool:
    """Every matched edge is tight under the labels."""
    rc = reduced_costs(g, duals)
    for u, v in matching.pairs():
        lo, hi = g.indptr[u], g.indptr[u + 1]
        pos = lo + int(np.searchsorted(g.indices[lo:hi], v))
        if rc[pos] != 0:
            return False
    return True


def matching_total(g, matching: Matching) -> int:
    """Total weight of ``matching`` under g's (possibly effective) weights."""
    total = 0
    for u, v in matching.pairs():
        lo, hi = g.indptr[u], g.indptr[u + 1]
        pos = lo + int(np.searchsorted(g.indices[lo:hi], v))
        total += int(g.weights[pos])
    return total


# ------------------------------------------------------- canonical tie-break

@numba.njit(cache=True)
def _scc(n, tptr, tv, mu, mv):
    """Tarjan SCCs of the alternating digraph u -> mv[v] over tight unmatched edges."""
    index = np.full(n, -1, dtype=np.int64)
    low = np.zeros(n, dtype=np.int64)
    on_stack = np.zeros(n, dtype=np.bool_)
    stack = np.empty(n, dtype=np.int64)
    comp = np.full(n, -1, dtype=np.int64)
    call_u = np.empty(n, dtype=np.int64)
    call_e = np.empty(n, dtype=np.int64)
    sp = 0
    counter = 0
    ncomp = 0
    for s in range(n):
        if index[s] >= 0:
            continue
        depth = 0
        call_u[0] = s
        call_e[0] = tptr[s]
        index[s] = counter
        low[s] = counter
        counter += 1
        stack[sp] = s
        sp += 1
        on_stack[s] = True
        while depth >= 0:
            u = call_u[depth]
            e = call_e[depth]
            descended = False
            while e < tptr[u + 1]:
                v = tv[e]
                e += 1
                if v == mu[u] or mv[v] < 0:
                    continue
                x = mv[v]
                if index[x] < 0:
                    call_e[depth] = e
                    depth += 1
                    call_u[depth] = x
                    call_e[depth] = tptr[x]
                    index[x] = counter
                    low[x] = counter
                    counter += 1
                    stack[sp] = x
                    sp += 1
                    on_stack[x] = True
                    descended = True
                    break
                elif on_stack[x] and index[x] < low[u]:
                    low[u] = index[x]
            if descended:
                continue
            if low[u] == index[u]:
                while True:
                    sp -= 1
                    x = stack[sp]
                    on_stack[x] = False
                    comp[x] = ncomp
                    if x == u:
                        break
                ncomp += 1
            depth -= 1
            if depth >= 0:
                p = call_u[depth]
                if low[u] < low[p]:
                    low[p] = low[u]
    return comp, ncomp


@numba.njit(cache=True)
def _canonicalize(indptr, indices, w, ex_u, ex_v, mu, mv):
    n = mu.shape[0]
    n2 = mv.shape[0]
    # tight edges in CSR form, v ascending within each row
    tptr = np.zeros(n + 1, dtype=np.int64)
    for u in range(n):
        base = ex_u[u]
        c = 0
        for e in range(indptr[u], indptr[u + 1]):
            if base + ex_v[indices[e]] + w[e] == 0:
                c += 1
        tptr[u + 1] = tptr[u] + c
    k = tptr[n]
    if k == n:
        # only the matched edges are tight: the optimum is unique
        return 0
    tv = np.empty(k, dtype=np.int64)
    for u in range(n):
        base = ex_u[u]
        i = tptr[u]
        for e in range(indptr[u], indptr[u + 1]):
            if base + ex_v[indices[e]] + w[e] == 0:
                tv[i] = indices[e]
                i += 1
    comp, ncomp = _scc(n, tptr, tv, mu, mv)
    csize = np.zeros(ncomp, dtype=np.int64)
    for u in range(n):
        csize[comp[u]] += 1
    if ncomp == n:
        return 0
    # tight edges grouped by v
    vptr = np.zeros(n2 + 1, dtype=np.int64)
    for i in range(k):
        vptr[tv[i] + 1] += 1
    for v in range(n2):
        vptr[v + 1] += vptr[v]
    vfill = vptr[:-1].copy()
    vrows = np.empty(k, dtype=np.int64)
    for u in range(n):
        for i in range(tptr[u], tptr[u + 1]):
            vrows[vfill[tv[i]]] = u
            vfill[tv[i]] += 1

    fixed = np.zeros(n, dtype=np.bool_)
    seen = np.full(n, -1, dtype=np.int64)
    nxt = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    rotations = 0
    for u in range(n):
        if csize[comp[u]] < 2:
            continue
        # vertices that can reach u along alternating edges, avoiding fixed ones
        seen[u] = u
        queue[0] = u
        head, tail = 0, 1
        while head < tail:
            x = queue[head]
            head += 1
            vx = mu[x]
            for i in range(vptr[vx], vptr[vx + 1]):
                y = vrows[i]
                if y != x and not fixed[y] and seen[y] != u and comp[y] == comp[u]:
                    seen[y] = u
                    nxt[y] = x
                    queue[tail] = y
                    tail += 1
        best = mu[u]
        for i in range(tptr[u], tptr[u + 1]):
            v = tv[i]
            if v >= best:
                break
            if mv[v] >= 0 and seen[mv[v]] == u:
                best = v
                break
        if best != mu[u]:
            x = mv[best]
            while x != u:
                y = nxt[x]
                v = mu[y]
                mu[x] = v
                mv[v] = x
                x = y
            mu[u] = best
            mv[best] = u
            rotations += 1
        fixed[u] = True
    return rotations


def canonicalize(g, duals: DualState, matching: Matching) -> int:
    """Rewrite an optimal perfect matching into the canonical optimal one.

    Every optimal matching is a perfect matching of the tight subgraph of
    any optimal labelling, so the lexicographically smallest one (u ascending,
    each taking the smallest feasible v) is the same whichever optimal
    matching and labels we start from.  Only vertices lying on an
    alternating cycle can move.  Returns the number of cycle rotations.
    """
    if g.n1 != g.n2 or not matching.is_perfect():
        raise ValueError("canonical form needs a perfect matching on a square graph")
    return int(_canonicalize(g.indptr, g.indices, g.weights, duals.ex_u, duals.ex_v,
                             matching.match_of_u, matching.match_of_v))
