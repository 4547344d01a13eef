"""Benchmark harness: run both solver variants over an instance manifest.

Produces three plot-ready tables:

* per-run :class:`BenchRecord` rows (``RECORD_COLUMNS``),
* mean runtime per (family, n, variant) with the MP_LS / MP_KM_M ratio
  (``RATIO_COLUMNS``),
* the per-iteration stage-1 series used for the scaling check
  (``SERIES_COLUMNS``).

Only the solver loop is timed; parsing and serialization are not.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import PMMWMError, format_milli
from .instances import GenSpec, expand_grid, instance_name, read_instance, write_instance
from .solver import SolverConfig, Variant, run

MANIFEST_COLUMNS = ("path", "family", "n", "m", "ubar", "replicate", "seed")
SERIES_COLUMNS = ("family", "n", "m", "ubar", "replicate", "variant", "iteration", "stage1_ns", "stage1_ops")
RATIO_COLUMNS = ("family", "n", "runs", "mean_ns_MP_LS", "mean_ns_MP_KM_M", "ratio", "objectives_equal")


@dataclass
class ManifestEntry:
    path: str
    family: str
    n: int
    m: int
    ubar: int
    replicate: int
    seed: int


@dataclass
class BenchRecord:
    family: str
    n: int
    m: int
    ubar: int
    replicate: int
    variant: str
    objective: str
    iterations: int
    stage1_ns: int
    stage2_ns: int
    stage3_ns: int
    total_ns: int
    status: str
    error: str


RECORD_COLUMNS = tuple(f.name for f in fields(BenchRecord))


# ---------------------------------------------------------------- manifests

def generate_suite(families: Sequence[str], sizes: Sequence[int], seed: int, replicates: int,
                   out_dir, grid: Optional[dict] = None) -> list[ManifestEntry]:
    """Write every (family, n, (m, ubar), replicate) instance and return the manifest.

    Replicate ``r`` uses seed ``seed + r``, which is the seed written into the
    file name.  One graph is drawn per (family, n, replicate) and shared by all
    (m, ubar) combinations of the grid.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for family in families:
        for n in sizes:
            combos = grid[n] if grid and n in grid else expand_grid(n)
            for r in range(replicates):
                s = seed + r
                g = GenSpec(family, n, s).build()
                for m, ubar in combos:
                    name = instance_name(family, n, m, ubar, s)
                    write_instance(out / name, g, m, ubar)
                    entries.append(ManifestEntry(str(out / name), family, n, m, ubar, r, s))
    return entries


def write_manifest(path, entries: Iterable[ManifestEntry]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(MANIFEST_COLUMNS)
        for e in entries:
            w.writerow([getattr(e, c) for c in MANIFEST_COLUMNS])


def read_manifest(path) -> list[ManifestEntry]:
    base = Path(path).parent
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            p = Path(row["path"])
            out.append(ManifestEntry(
                str(p if p.is_absolute() else base / p), row["family"], int(row["n"]), int(row["m"]),
                int(row["ubar"]), int(row["replicate"]), int(row["seed"])))
    return out


# ---------------------------------------------------------------- running

def warmup() -> None:
    """Compile and exercise every kernel once so no timed run pays for it."""
    g = GenSpec("SPARSE30", 12, 0).build()
    for v in Variant:
        run(g, 3, 4, SolverConfig(variant=v, patience=3))


def _solve_entry(entry: ManifestEntry, variants: Sequence[str], cfg_kwargs: dict):
    records, series = [], []
    try:
        g, m, ubar = read_instance(entry.path)
    except Exception as exc:  # noqa: BLE001 - recorded per row
        for v in variants:
            records.append(_failed(entry, v, exc))
        return records, series
    for v in variants:
        try:
            sol, trace = run(g, m, ubar, SolverConfig(variant=v, **cfg_kwargs))
        except Exception as exc:  # noqa: BLE001 - recorded per row
            records.append(_failed(entry, v, exc))
            continue
        st = trace.stage_ns().sum(axis=0) if trace.iterations else np.zeros(3, dtype=np.int64)
        records.append(BenchRecord(entry.family, entry.n, m, ubar, entry.replicate, str(Variant(v).value),
                                   format_milli(sol.objective), trace.iterations,
                                   int(st[0]), int(st[1]), int(st[2]), trace.total_ns, "ok", ""))
        for r in trace.records:
            series.append((entry.family, entry.n, m, ubar, entry.replicate, Variant(v).value,
                           r.iteration, r.stage_ns[0], r.stage1_ops))
    return records, series


def _failed(entry: ManifestEntry, variant: str, exc: Exception) -> BenchRecord:
    status = "infeasible" if isinstance(exc, PMMWMError) else "error"
    return BenchRecord(entry.family, entry.n, entry.m, entry.ubar, entry.replicate, str(variant),
                       "", 0, 0, 0, 0, 0, status, f"{type(exc).__name__}: {exc}")


def _worker_init() -> None:
    warmup()


def run_bench(entries: Sequence[ManifestEntry], variants: Sequence[str] = ("MP_LS", "MP_KM_M"),
              parallelism: int = 1, **cfg_kwargs) -> tuple[list[BenchRecord], list[tuple]]:
    """Solve every entry under every variant.

    Both variants of one instance run back to back inside the same worker,
    so they never compete for a core.  Results come back in manifest order.
    """
    variants = [Variant(v).value for v in variants]
    records, series = [], []
    if parallelism <= 1:
        warmup()
        results = (_solve_entry(e, variants, cfg_kwargs) for e in entries)
        for rec, ser in results:
            records.extend(rec)
            series.extend(ser)
        return records, series
    with ProcessPoolExecutor(max_workers=parallelism, initializer=_worker_init) as pool:
        futures = [pool.submit(_solve_entry, e, variants, cfg_kwargs) for e in entries]
        for fut in futures:
            rec, ser = fut.result()
            records.extend(rec)
            series.extend(ser)
    return records, series


# ---------------------------------------------------------------- aggregation

def ratio_table(records: Iterable[BenchRecord]) -> list[dict]:
    """Mean total runtime per (family, n, variant) and the LS / KM-M ratio."""
    times = defaultdict(list)
    objs = defaultdict(dict)
    for r in records:
        if r.status != "ok":
            continue
        times[(r.family, r.n, r.variant)].append(r.total_ns)
        objs[(r.family, r.n)].setdefault((r.m, r.ubar, r.replicate), {})[r.variant] = r.objective
    rows = []
    for family, n in sorted({(f, n) for f, n, _ in times}, key=lambda k: (k[0], k[1])):
        ls = times.get((family, n, "MP_LS"), [])
        kmm = times.get((family, n, "MP_KM_M"), [])
        mean_ls = float(np.mean(ls)) if ls else float("nan")
        mean_kmm = float(np.mean(kmm)) if kmm else float("nan")
        pairs = [d for d in objs[(family, n)].values() if len(d) == 2]
        rows.append({
            "family": family,
            "n": n,
            "runs": max(len(ls), len(kmm)),
            "mean_ns_MP_LS": f"{mean_ls:.0f}",
            "mean_ns_MP_KM_M": f"{mean_kmm:.0f}",
            "ratio": f"{mean_ls / mean_kmm:.4f}" if ls and kmm else "",
            "objectives_equal": all(d["MP_LS"] == d["MP_KM_M"] for d in pairs),
        })
    return rows


def stage1_means(series: Iterable[tuple], skip_first: bool = True) -> dict:
    """Mean stage-1 ns per iteration keyed by (variant, n)."""
    acc = defaultdict(list)
    for family, n, m, ubar, rep, variant, it, ns, ops in series:
        if skip_first and it == 1:
            continue
        acc[(variant, n)].append(ns)
    return {k: float(np.mean(v)) for k, v in acc.items()}


def loglog_slope(ns: Sequence[float], values: Sequence[float]) -> float:
    slope, _ = np.polyfit(np.log(np.asarray(ns, dtype=float)), np.log(np.asarray(values, dtype=float)), 1)
    return float(slope)


# ---------------------------------------------------------------- output

def write_records(path, records: Iterable[BenchRecord]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RECORD_COLUMNS)
        for r in records:
            w.writerow([getattr(r, c) for c in RECORD_COLUMNS])


def read_records(path) -> list[BenchRecord]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            kw = {}
            for f in fields(BenchRecord):
                kw[f.name] = row[f.name] if f.type == "str" else int(row[f.name])
            out.append(BenchRecord(**kw))
    return out


def write_rows(path, columns: Sequence[str], rows: Iterable) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        for row in rows:
            w.writerow([row[c] for c in columns] if isinstance(row, dict) else row)


def records_as_dicts(records: Iterable[BenchRecord]) -> list[dict]:
    return [asdict(r) for r in records]
