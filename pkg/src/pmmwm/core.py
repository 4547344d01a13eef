"""Domain types for PMMWM: graphs, matchings, partitions, solutions.

Weights are exact integers in milli-units (``w`` is stored as
``round(1000 * w)``).  Vertices and parts are 0-indexed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from typing import Iterable, Optional

import numba
import numpy as np

SCALE = 1000
NO_MATCH = -1


class PMMWMError(Exception):
    """Base class for every error raised by this package."""


class Infeasible(PMMWMError):
    pass


class InfeasibleMatching(Infeasible):
    pass


class EdgeNotFound(PMMWMError):
    pass


class IsolatedVertex(Infeasible):
    pass


class GridExhausted(PMMWMError):
    pass


class TooLarge(PMMWMError):
    pass


class PreconditionError(PMMWMError):
    pass


class ParseError(PMMWMError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


_DECIMAL = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)")


def to_milli(text: str) -> int:
    """Parse a decimal string with at most 3 fraction digits into milli-units."""
    text = text.strip()
    if not _DECIMAL.fullmatch(text):
        raise ValueError(f"not a plain decimal: {text!r}")
    d = Decimal(text)
    scaled = d * SCALE
    if scaled != scaled.to_integral_value():
        raise ValueError(f"more than 3 fraction digits: {text!r}")
    return int(scaled)


def format_milli(value: int) -> str:
    """Render milli-units as a decimal with exactly 3 fraction digits."""
    value = int(value)
    sign = "-" if value < 0 else ""
    q, r = divmod(abs(value), SCALE)
    return f"{sign}{q}.{r:03d}"


class BipartiteGraph:
    """Weighted bipartite graph G(U, V, E) stored in CSR form by left vertex.

    ``indptr``/``indices``/``weights`` follow the scipy CSR convention; the
    neighbours of each ``u`` are sorted by ascending ``v``.  Instances are
    treated as immutable once built.
    """

    def __init__(self, n1: int, n2: int, edges: Iterable[tuple[int, int, int]]):
        n1, n2 = int(n1), int(n2)
        if n1 < 1 or n2 < 1:
            raise ValueError("both sides need at least one vertex")
        if n1 > n2:
            raise ValueError(f"n1={n1} > n2={n2}; transpose the graph first")
        rows: list[dict[int, int]] = [dict() for _ in range(n1)]
        for u, v, w in edges:
            u, v, w = int(u), int(v), int(w)
            if not (0 <= u < n1 and 0 <= v < n2):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if w < 0:
                raise ValueError(f"negative weight on edge ({u}, {v})")
            if v in rows[u]:
                raise ValueError(f"duplicate edge ({u}, {v})")
            rows[u][v] = w
        self.n1 = n1
        self.n2 = n2
        indptr = np.zeros(n1 + 1, dtype=np.int64)
        for u, row in enumerate(rows):
            indptr[u + 1] = indptr[u] + len(row)
        indices = np.empty(indptr[-1], dtype=np.int64)
        weights = np.empty(indptr[-1], dtype=np.int64)
        for u, row in enumerate(rows):
            vs = sorted(row)
            lo = indptr[u]
            indices[lo:lo + len(vs)] = vs
            weights[lo:lo + len(vs)] = [row[v] for v in vs]
        self.indptr = indptr
        self.indices = indices
        self.weights = weights
        for arr in (indptr, indices, weights):
            arr.setflags(write=False)
        self.c_max = int(weights.max()) if len(weights) else 0

    @classmethod
    def from_dense(cls, matrix, missing=None) -> "BipartiteGraph":
        """Build from an ``n1 x n2`` matrix of milli-unit weights.

        Entries equal to ``missing`` are absent edges; with ``missing=None``
        NaN entries of a float matrix are.
        """
        a = np.asarray(matrix)
        n1, n2 = a.shape
        if missing is None:
            present = ~np.isnan(a) if a.dtype.kind == "f" else np.ones(a.shape, dtype=bool)
        else:
            present = a != missing
        rows, cols = np.nonzero(present)
        return cls._from_sorted(n1, n2, rows, cols, a[rows, cols].astype(np.int64))

    @classmethod
    def _from_sorted(cls, n1, n2, rows, cols, weights) -> "BipartiteGraph":
        # rows/cols already in row-major order without duplicates
        if n1 > n2:
            raise ValueError(f"n1={n1} > n2={n2}; transpose the graph first")
        if len(weights) and weights.min() < 0:
            raise ValueError("negative edge weight")
        self = cls.__new__(cls)
        self.n1, self.n2 = int(n1), int(n2)
        self.indptr = np.concatenate(([0], np.cumsum(np.bincount(rows, minlength=n1)))).astype(np.int64)
        self.indices = np.asarray(cols, dtype=np.int64).copy()
        self.weights = np.asarray(weights, dtype=np.int64).copy()
        for arr in (self.indptr, self.indices, self.weights):
            arr.setflags(write=False)
        self.c_max = int(self.weights.max()) if len(self.weights) else 0
        return self

    @property
    def n_edges(self) -> int:
        return len(self.indices)

    def neighbors(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.indptr[u], self.indptr[u + 1]
        return self.indices[lo:hi], self.weights[lo:hi]

    def edge_index(self, u: int, v: int) -> int:
        """Position of edge (u, v) in the CSR arrays, or raise EdgeNotFound."""
        if not (0 <= u < self.n1):
            raise EdgeNotFound(f"no vertex u={u}")
        lo, hi = self.indptr[u], self.indptr[u + 1]
        pos = lo + int(np.searchsorted(self.indices[lo:hi], v))
        if pos < hi and self.indices[pos] == v:
            return pos
        raise EdgeNotFound(f"edge ({u}, {v}) is not in the graph")

    def has_edge(self, u: int, v: int) -> bool:
        try:
            self.edge_index(u, v)
        except EdgeNotFound:
            return False
        return True

    def weight(self, u: int, v: int) -> int:
        return int(self.weights[self.edge_index(u, v)])

    def edges(self):
        for u in range(self.n1):
            vs, ws = self.neighbors(u)
            for v, w in zip(vs.tolist(), ws.tolist()):
                yield u, v, w

    def to_dense(self, missing: int = -1) -> np.ndarray:
        out = np.full((self.n1, self.n2), missing, dtype=np.int64)
        rows = np.repeat(np.arange(self.n1), np.diff(self.indptr))
        out[rows, self.indices] = self.weights
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (self.n1 == other.n1 and self.n2 == other.n2
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.weights, other.weights))

    def __repr__(self) -> str:
        return f"BipartiteGraph(n1={self.n1}, n2={self.n2}, edges={self.n_edges})"


def max_cardinality(g: BipartiteGraph) -> int:
    """Size of a maximum-cardinality matching (scipy Hopcroft-Karp)."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import maximum_bipartite_matching

    data = np.ones(g.n_edges, dtype=np.int8)
    a = csr_matrix((data, g.indices, g.indptr), shape=(g.n1, g.n2))
    m = maximum_bipartite_matching(a, perm_type="column")
    return int(np.count_nonzero(m >= 0))


@dataclass
class Matching:
    match_of_u: np.ndarray
    match_of_v: np.ndarray

    @classmethod
    def empty(cls, n1: int, n2: int) -> "Matching":
        return cls(np.full(n1, NO_MATCH, dtype=np.int64),
                   np.full(n2, NO_MATCH, dtype=np.int64))

    @classmethod
    def from_pairs(cls, n1: int, n2: int, match_of_u) -> "Matching":
        m = cls.empty(n1, n2)
        for u, v in enumerate(match_of_u):
            if v is not None and v != NO_MATCH:
                m.match_of_u[u] = v
                m.match_of_v[v] = u
        return m

    def copy(self) -> "Matching":
        return Matching(self.match_of_u.copy(), self.match_of_v.copy())

    @property
    def size(self) -> int:
        return int(np.count_nonzero(self.match_of_u != NO_MATCH))

    def is_empty(self) -> bool:
        return self.size == 0

    def is_perfect(self) -> bool:
        return bool(np.all(self.match_of_u != NO_MATCH))

    def is_consistent(self) -> bool:
        for u, v in enumerate(self.match_of_u.tolist()):
            if v != NO_MATCH and (v >= len(self.match_of_v) or self.match_of_v[v] != u):
                return False
        for v, u in enumerate(self.match_of_v.tolist()):
            if u != NO_MATCH and (u >= len(self.match_of_u) or self.match_of_u[u] != v):
                return False
        return True

    def pairs(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in enumerate(self.match_of_u.tolist()) if v != NO_MATCH]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return (np.array_equal(self.match_of_u, other.match_of_u)
                and np.array_equal(self.match_of_v, other.match_of_v))


def matching_weight(g: BipartiteGraph, pi: Matching, weights: Optional[np.ndarray] = None) -> int:
    """Total weight of a perfect matching; ``weights`` overrides g's CSR weights."""
    w = g.weights if weights is None else weights
    return int(w[edge_positions(g, pi)].sum())


@dataclass
class Partition:
    part_of_u: np.ndarray
    m: int
    ubar: int

    def __post_init__(self):
        self.part_of_u = np.asarray(self.part_of_u, dtype=np.int64)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.part_of_u, minlength=self.m)

    def members(self, k: int) -> np.ndarray:
        return np.flatnonzero(self.part_of_u == k)

    def is_feasible(self) -> bool:
        p = self.part_of_u
        if self.m < 1 or len(p) == 0:
            return False
        if p.min() < 0 or p.max() >= self.m:
            return False
        return bool(self.sizes().max() <= self.ubar)


@dataclass
class Solution:
    matching: Matching
    partition: Partition
    objective: int


@numba.njit(cache=True)
def _edge_positions(indptr, indices, match_of_u):
    out = np.empty(match_of_u.shape[0], dtype=np.int64)
    for u in range(match_of_u.shape[0]):
        v = match_of_u[u]
        lo, hi = indptr[u], indptr[u + 1]
        pos = lo + np.searchsorted(indices[lo:hi], v)
        if v < 0 or pos >= hi or indices[pos] != v:
            out[u] = -1 - u
        else:
            out[u] = pos
    return out


def edge_positions(g, pi: Matching) -> np.ndarray:
    """CSR position of each u's matched edge."""
    pos = _edge_positions(g.indptr, g.indices, pi.match_of_u)
    bad = np.flatnonzero(pos < 0)
    if len(bad):
        u = int(bad[0])
        if pi.match_of_u[u] == NO_MATCH:
            raise InfeasibleMatching(f"u={u} is unmatched")
        raise EdgeNotFound(f"edge ({u}, {int(pi.match_of_u[u])}) is not in the graph")
    return pos


def matched_weights(g: BipartiteGraph, pi: Matching) -> np.ndarray:
    """Per-u original weight of its matched edge (length n1)."""
    return g.weights[edge_positions(g, pi)]


def partition_weights(g: BipartiteGraph, pi: Matching, p: Partition) -> np.ndarray:
    """Per-part sums of matched-edge weights (length m)."""
    return _part_sums(matched_weights(g, pi), p.part_of_u, p.m)


def _part_sums(w: np.ndarray, part_of_u: np.ndarray, m: int) -> np.ndarray:
    out = np.zeros(m, dtype=np.int64)
    np.add.at(out, part_of_u, w)
    return out


def evaluate_objective(g: BipartiteGraph, pi: Matching, p: Partition) -> int:
    """f(P, Pi): the heaviest part's sum of matched-edge weights."""
    return int(partition_weights(g, pi, p).max())


@dataclass
class ValidationReport:
    ok: bool
    violation: Optional[str] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_solution(g: BipartiteGraph, s: Solution) -> ValidationReport:
    """Check matching, partition and capacity feasibility plus the stored objective; never raises.

    Violation ids: ``constraint-1`` (a u is unmatched), ``constraint-2``
    (a v is used twice or arrays disagree), ``edge-not-found``,
    ``constraint-3`` (a u without a valid part), ``constraint-4`` (part over
    capacity), ``objective-mismatch``.
    """
    pi, p = s.matching, s.partition
    mu = np.asarray(pi.match_of_u)
    if len(mu) != g.n1:
        return ValidationReport(False, "constraint-1", f"expected {g.n1} matched entries, got {len(mu)}")
    for u, v in enumerate(mu.tolist()):
        if v == NO_MATCH:
            return ValidationReport(False, "constraint-1", f"u{u + 1} is unmatched")
        if not (0 <= v < g.n2):
            return ValidationReport(False, "edge-not-found", f"u{u + 1} matched to out-of-range v{v + 1}")
    used, counts = np.unique(mu, return_counts=True)
    if np.any(counts > 1):
        v = int(used[np.argmax(counts > 1)])
        return ValidationReport(False, "constraint-2", f"v{v + 1} matched more than once")
    if not pi.is_consistent():
        return ValidationReport(False, "constraint-2", "match_of_u and match_of_v disagree")
    for u, v in enumerate(mu.tolist()):
        if not g.has_edge(u, v):
            return ValidationReport(False, "edge-not-found", f"(u{u + 1}, v{v + 1}) is not an edge")
    parts = np.asarray(p.part_of_u)
    if len(parts) != g.n1:
        return ValidationReport(False, "constraint-3", f"expected {g.n1} part entries, got {len(parts)}")
    bad = np.flatnonzero((parts < 0) | (parts >= p.m))
    if len(bad):
        return ValidationReport(False, "constraint-3", f"u{bad[0] + 1} has no valid part")
    sizes = np.bincount(parts, minlength=p.m)
    if sizes.max() > p.ubar:
        k = int(np.argmax(sizes))
        return ValidationReport(False, "constraint-4", f"part {k + 1} holds {sizes[k]} > ubar={p.ubar}")
    f = evaluate_objective(g, pi, p)
    if f != s.objective:
        return ValidationReport(False, "objective-mismatch",
                                f"stored {format_milli(s.objective)} != recomputed {format_milli(f)}")
    return ValidationReport(True)
