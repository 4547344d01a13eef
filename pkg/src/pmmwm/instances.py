"""Seeded benchmark instance families and the (m, ubar) parameter grid.

All weights are drawn from the milli-unit grid ``{1.000, 1.001, ..., 1000.000}``.
Randomness comes from numpy's PCG64 generator seeded through a
``SeedSequence``, so instances are reproducible across platforms.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .core import (
    NO_MATCH,
    SCALE,
    BipartiteGraph,
    GridExhausted,
    Infeasible,
    Matching,
    ParseError,
    Partition,
    Solution,
    format_milli,
    max_cardinality,
    to_milli,
)

W_MIN = 1 * SCALE
W_MAX = 1000 * SCALE
GRID_SIZE = W_MAX - W_MIN + 1

# family name -> (kind, percent)
FAMILIES = {
    "BPS70": ("bps", 70),
    "BPS80": ("bps", 80),
    "RAND": ("rand", None),
    "SPARSE70": ("sparse", 70),
    "SPARSE80": ("sparse", 80),
    "SPARSE30": ("sparse", 30),
    "SPARSE20": ("sparse", 20),
}
FAMILY_NAMES = tuple(FAMILIES)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def _percent(x) -> int:
    p = round(float(x) * 100) if float(x) <= 1 else int(x)
    if not 0 < p <= 100:
        raise ValueError(f"ratio/density out of range: {x}")
    return p


def _distinct_weights(rng: np.random.Generator, k: int) -> np.ndarray:
    if k > GRID_SIZE:
        raise GridExhausted(f"{k} distinct weights requested, grid has {GRID_SIZE}")
    return rng.choice(GRID_SIZE, size=k, replace=False).astype(np.int64) + W_MIN


def gen_bps(n: int, ratio, seed) -> BipartiteGraph:
    """Complete graph whose ``floor(ratio*n)`` lowest u's get the globally smallest weights.

    ``n*n`` distinct weights are sorted into a list L.  Column v_1, ..., v_n in
    turn takes the first ``floor(ratio*n)`` elements of L for edges
    (u_1, v_i), (u_2, v_i), ...; each remaining edge of v_i (ascending u)
    then takes a uniformly random remaining element.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = _rng(seed)
    head = _percent(ratio) * n // 100
    values = np.sort(_distinct_weights(rng, n * n))

    # pool: remaining indices into `values`, with positions for O(1) removal
    pool = np.arange(n * n, dtype=np.int64)
    where = np.arange(n * n, dtype=np.int64)
    size = n * n
    used = np.zeros(n * n, dtype=bool)
    smallest = 0

    def take(i):
        nonlocal size
        used[i] = True
        j = where[i]
        last = pool[size - 1]
        pool[j] = last
        where[last] = j
        size -= 1

    w = np.empty((n, n), dtype=np.int64)
    for v in range(n):
        for u in range(head):
            while used[smallest]:
                smallest += 1
            w[u, v] = values[smallest]
            take(smallest)
        for u in range(head, n):
            i = int(pool[rng.integers(size)])
            w[u, v] = values[i]
            take(i)
    return BipartiteGraph.from_dense(w)


def gen_rand(n: int, seed) -> BipartiteGraph:
    """Complete graph with independent uniform integer weights in [1, 1000]."""
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = _rng(seed)
    w = rng.integers(1, 1001, size=(n, n), dtype=np.int64) * SCALE
    return BipartiteGraph.from_dense(w)


def sparse_edge_count(n: int, density) -> int:
    return -(-_percent(density) * n * n // 100)


def gen_sparse(n: int, density, seed) -> BipartiteGraph:
    """Graph with ``ceil(density*n^2)`` edges that always has a perfect matching.

    The diagonal (u_i, v_i) is added first with random weights from L; every
    remaining weight goes to a uniformly random absent pair.  Finally the V
    side is relabelled by a random permutation.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    k = sparse_edge_count(n, density)
    if k < n:
        raise Infeasible(f"{k} edges cannot hold a perfect matching on n={n}")
    rng = _rng(seed)
    values = list(_distinct_weights(rng, k).tolist())

    def pop_random():
        i = int(rng.integers(len(values)))
        values[i], values[-1] = values[-1], values[i]
        return values.pop()

    w = np.full((n, n), -1, dtype=np.int64)
    for i in range(n):
        w[i, i] = pop_random()
    while values:
        while True:
            u, v = (int(x) for x in rng.integers(n, size=2))
            if w[u, v] < 0:
                break
        w[u, v] = pop_random()
    perm = rng.permutation(n)
    relabelled = np.full_like(w, -1)
    relabelled[:, perm] = w
    return BipartiteGraph.from_dense(relabelled, missing=-1)


def generate(family: str, n: int, seed) -> BipartiteGraph:
    kind, pct = FAMILIES[family]
    if kind == "bps":
        return gen_bps(n, pct / 100, seed)
    if kind == "rand":
        return gen_rand(n, seed)
    return gen_sparse(n, pct / 100, seed)


def derive_seed(seed: int, family: str, n: int, replicate: int) -> np.random.SeedSequence:
    """Independent per-instance seed from (seed, family, n, replicate)."""
    return np.random.SeedSequence([int(seed), FAMILY_NAMES.index(family), int(n), int(replicate)])


@dataclass(frozen=True)
class GenSpec:
    family: str
    n: int
    seed: int
    replicate: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 2:
            raise ValueError("n must be >= 2")

    def build(self) -> BipartiteGraph:
        return generate(self.family, self.n, derive_seed(self.seed, self.family, self.n, self.replicate))


def m_choices(n: int) -> list[int]:
    out = []
    for m in (2, 4 * n // 100, 8 * n // 100, n // 8):
        if m >= 1 and m not in out:
            out.append(m)
    return out


def ubar_choices(n: int, m: int) -> list[int]:
    c = -(-n // m)
    out = []
    for u in (c, c + (n - c) // 3, n):
        if u not in out:
            out.append(u)
    return out


def expand_grid(n: int) -> list[tuple[int, int]]:
    """All feasible (m, ubar) pairs of the experimental grid for size n."""
    return [(m, u) for m in m_choices(n) for u in ubar_choices(n, m) if m * u >= n]


def instance_name(family: str, n: int, m: int, ubar: int, seed: int) -> str:
    return f"{family}_n{n}_m{m}_u{ubar}_s{seed}.pmm"


# ----------------------------------------------------------------- file I/O

PathLike = Union[str, os.PathLike]


def format_instance(g: BipartiteGraph, m: int, ubar: int) -> str:
    lines = [f"{g.n1} {g.n2} {m} {ubar} {g.n_edges}"]
    lines.extend(f"{u + 1} {v + 1} {format_milli(w)}" for u, v, w in g.edges())
    return "\n".join(lines) + "\n"


def write_instance(path: PathLike, g: BipartiteGraph, m: int, ubar: int) -> None:
    Path(path).write_text(format_instance(g, m, ubar))


def parse_instance(text: str) -> tuple[BipartiteGraph, int, int]:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    head = lines[0].split()
    if len(head) != 5:
        raise ParseError("header must be 'n1 n2 m ubar edge_count'", 1)
    try:
        n1, n2, m, ubar, count = (int(x) for x in head)
    except ValueError:
        raise ParseError("header fields must be integers", 1) from None
    if n1 < 1 or n2 < n1 or m < 1 or ubar < 1 or count < 0:
        raise ParseError(f"invalid header values {head}", 1)
    edges = []
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError("expected 'u v w'", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
            w = to_milli(parts[2])
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if not (1 <= u <= n1 and 1 <= v <= n2):
            raise ParseError(f"vertex out of range: {u} {v}", lineno)
        if not (0 <= w <= W_MAX):
            raise ParseError(f"weight {parts[2]} outside [0, 1000]", lineno)
        if (u, v) in seen:
            raise ParseError(f"duplicate edge {u} {v}", lineno)
        seen.add((u, v))
        edges.append((u - 1, v - 1, w))
    if len(edges) != count:
        raise ParseError(f"header announces {count} edges, found {len(edges)}", 1)
    g = BipartiteGraph(n1, n2, edges)
    if m * ubar < n1:
        raise Infeasible(f"m*ubar={m * ubar} < n1={n1}")
    if max_cardinality(g) < n1:
        raise Infeasible("graph has no perfect matching on U")
    return g, m, ubar


def read_instance(path: PathLike) -> tuple[BipartiteGraph, int, int]:
    return parse_instance(Path(path).read_text())


def format_solution(s: Solution) -> str:
    """Objective, then 1-indexed matched v per u, then 1-indexed part per u."""
    mv = " ".join(str(int(v) + 1) for v in s.matching.match_of_u)
    parts = " ".join(str(int(k) + 1) for k in s.partition.part_of_u)
    return f"{format_milli(s.objective)}\n{mv}\n{parts}\n"


def write_solution(path: PathLike, s: Solution) -> None:
    Path(path).write_text(format_solution(s))


def parse_solution(text: str, g: BipartiteGraph, m: int, ubar: int) -> Solution:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 3:
        raise ParseError(f"expected 3 lines, found {len(lines)}")
    try:
        objective = to_milli(lines[0])
    except ValueError as exc:
        raise ParseError(str(exc), 1) from None
    fields = []
    for lineno in (2, 3):
        try:
            vals = [int(x) - 1 for x in lines[lineno - 1].split()]
        except ValueError:
            raise ParseError("expected integers", lineno) from None
        if len(vals) != g.n1:
            raise ParseError(f"expected {g.n1} entries, found {len(vals)}", lineno)
        fields.append(vals)
    match_of_u, parts = fields
    mu = np.array(match_of_u, dtype=np.int64)
    mv = np.full(g.n2, NO_MATCH, dtype=np.int64)
    for u, v in enumerate(match_of_u):
        if 0 <= v < g.n2:
            mv[v] = u
    return Solution(Matching(mu, mv), Partition(np.array(parts, dtype=np.int64), m, ubar), objective)


def read_solution(path: PathLike, g: BipartiteGraph, m: int, ubar: int) -> Solution:
    return parse_solution(Path(path).read_text(), g, m, ubar)
